//! Tree-like systems of length `pd I(T)` for stretched forests, following
//! the inductive construction on the splitting vertex, plus the closed-form
//! systems for double stars and line graphs.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{make_double_star, make_line, Edge, Forest};
use crate::ideal::edge_ideal;
use crate::monomial::SquarefreeMonomial;
use crate::pd::{pd_double_star, pd_line, PdMemo};
use crate::tls::{TlsElement, TreeLikeSystem};

/// Hard bound on the number of rewriting rounds in the `n = 2` step. Every
/// reduction reaches a terminal construction within four rounds; the rest
/// is slack.
const MAX_ROUNDS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseTag {
    Matching,
    StarComponent,
    Case1,
    #[serde(rename = "Case2.1")]
    Case2_1,
    #[serde(rename = "Case2.2.1")]
    Case2_2_1,
    #[serde(rename = "Case2.2.2")]
    Case2_2_2,
    #[serde(rename = "Case3.1a")]
    Case3_1a,
    #[serde(rename = "Case3.1b")]
    Case3_1b,
    #[serde(rename = "Case3.2")]
    Case3_2,
    NBig,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::Matching => "Matching",
            CaseTag::StarComponent => "StarComponent",
            CaseTag::Case1 => "Case1",
            CaseTag::Case2_1 => "Case2.1",
            CaseTag::Case2_2_1 => "Case2.2.1",
            CaseTag::Case2_2_2 => "Case2.2.2",
            CaseTag::Case3_1a => "Case3.1a",
            CaseTag::Case3_1b => "Case3.1b",
            CaseTag::Case3_2 => "Case3.2",
            CaseTag::NBig => "NBig",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseEntry {
    pub tag: CaseTag,
    /// Splitting vertex of the step, if there is one.
    pub vertex: Option<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AraCertificate {
    pub system: TreeLikeSystem,
    pub claimed_ara: usize,
    pub pd_value: usize,
    pub case_log: Vec<CaseEntry>,
}

impl AraCertificate {
    /// The system validates, its support is exactly `edges`, and its length
    /// equals both recorded values.
    pub fn check(&self, edges: &[Edge]) -> Result<()> {
        if let Err(v) = self.system.validate() {
            return Err(Error::InvalidSystem(v.to_string()));
        }
        let want: BTreeSet<SquarefreeMonomial> = edges.iter().map(|&(u, v)| SquarefreeMonomial::edge(u, v)).collect();
        if self.system.support() != want {
            return Err(Error::SupportMismatch);
        }
        if self.system.len() != self.claimed_ara || self.claimed_ara != self.pd_value {
            return Err(Error::Internal(format!(
                "length {} vs claimed {} vs pd {}",
                self.system.len(),
                self.claimed_ara,
                self.pd_value
            )));
        }
        Ok(())
    }

    pub fn render_text(&self, labels: &[String]) -> String {
        let mut out = format!("length {} (pd {})\n", self.system.len(), self.pd_value);
        for (i, e) in self.system.elements().iter().enumerate() {
            out.push_str(&format!("q{i} = {}\n", e.render(labels)));
        }
        out
    }
}

/// A tree-like system for `I(T)` of length `pd I(T)`.
pub fn build_stretched_tls(forest: &Forest) -> Result<AraCertificate> {
    if forest.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    if !forest.is_stretched() {
        return Err(Error::NotStretched);
    }
    let mut b = Builder::new(forest);
    let system = b.build(forest.edges())?;
    let pd_value = b.pd.value(forest.edges());
    let cert = AraCertificate { claimed_ara: system.len(), system, pd_value, case_log: b.log };
    cert.check(forest.edges())?;
    Ok(cert)
}

fn mono(u: usize, v: usize) -> SquarefreeMonomial {
    SquarefreeMonomial::edge(u, v)
}

fn iso(u: usize, v: usize) -> TlsElement {
    TlsElement::isolated(mono(u, v))
}

fn pair(a: SquarefreeMonomial, b: SquarefreeMonomial) -> TlsElement {
    TlsElement::pair(a, b).expect("distinct edges")
}

struct Builder<'a> {
    base: &'a Forest,
    pd: PdMemo<'a>,
    cache: HashMap<Vec<Edge>, TreeLikeSystem>,
    log: Vec<CaseEntry>,
}

impl<'a> Builder<'a> {
    fn new(base: &'a Forest) -> Self {
        Builder { base, pd: PdMemo::new(base), cache: HashMap::new(), log: Vec::new() }
    }

    fn note(&mut self, tag: CaseTag, vertex: Option<usize>, detail: String) {
        self.log.push(CaseEntry { tag, vertex, detail });
    }

    fn label(&self, v: usize) -> &str {
        self.base.label(v)
    }

    fn build(&mut self, edges: &[Edge]) -> Result<TreeLikeSystem> {
        let mut key = edges.to_vec();
        key.sort_unstable();
        if let Some(s) = self.cache.get(&key) {
            return Ok(s.clone());
        }
        let sub = self.base.with_edges(&key);
        let system = if key.is_empty() {
            TreeLikeSystem::empty(self.base.n())
        } else {
            let comps = sub.nontrivial_components();
            if comps.len() > 1 {
                let mut acc = TreeLikeSystem::empty(self.base.n());
                for c in &comps {
                    let part = self.build(c)?;
                    acc = acc.juxtapose(&part)?;
                }
                acc
            } else {
                self.build_component(&sub)?
            }
        };
        let want = self.pd.value(&key);
        if system.len() != want {
            return Err(Error::Internal(format!(
                "system of length {} for a forest with pd {want}",
                system.len()
            )));
        }
        self.cache.insert(key, system.clone());
        Ok(system)
    }

    fn build_component(&mut self, sub: &Forest) -> Result<TreeLikeSystem> {
        let n_all = self.base.n();
        if sub.edge_count() == 1 {
            self.note(CaseTag::Matching, None, format!("single edge {}", render_edges(sub)));
            return Ok(TreeLikeSystem::isolated_edges(n_all, sub.edges()));
        }
        let sv = sub.select_splitting_vertex()?;
        let v = sv.vertex;
        if sv.neighbors.iter().all(|&w| sub.degree(w) == 1) {
            self.note(CaseTag::StarComponent, Some(v), format!("star at {} with {} edges", self.label(v), sv.n()));
            return Ok(TreeLikeSystem::isolated_edges(n_all, sub.edges()));
        }
        let n = sv.n();
        let vn = sv.last();
        let ws: Vec<usize> = sub.neighbors(vn).iter().copied().filter(|&w| w != v).collect();
        let mut removed = sv.neighbors.clone();
        removed.push(v);
        let t_dd = sub.without_vertices(&removed);
        if n >= 3 {
            let &[w1] = ws.as_slice() else {
                return Err(Error::Internal(format!("n = {n} needs m = 1, got m = {}", ws.len())));
            };
            let (v1, middle) = (sv.neighbors[0], &sv.neighbors[1..n - 1]);
            let mut elements = vec![iso(v, vn), pair(mono(v, v1), mono(vn, w1))];
            elements.extend(middle.iter().map(|&vi| iso(v, vi)));
            let head = TreeLikeSystem::new(n_all, elements)?;
            let rest = self.build(t_dd.edges())?;
            self.note(
                CaseTag::NBig,
                Some(v),
                format!("n = {n}, prefix of {n} elements, then {} from T''", rest.len()),
            );
            return head.juxtapose(&rest);
        }
        self.two_neighbours(sub, v, sv.neighbors[0], vn, &ws, &t_dd, None)
    }

    /// The `n = 2` step: `v` has the leaf `v1` and the neighbour `v2`, whose
    /// other neighbours are `ws`. `initial` overrides the system for `T'`
    /// that is otherwise built recursively.
    #[allow(clippy::too_many_arguments)]
    fn two_neighbours(
        &mut self,
        sub: &Forest,
        v: usize,
        v1: usize,
        v2: usize,
        ws: &[usize],
        t_dd: &Forest,
        initial: Option<TreeLikeSystem>,
    ) -> Result<TreeLikeSystem> {
        let n_all = self.base.n();
        let t_prime = sub.without_vertices(&[v1]);
        let a_prime = self.pd.value(t_prime.edges());
        let a_dd = self.pd.value(t_dd.edges());
        let vv1 = mono(v, v1);
        let vv2 = mono(v, v2);
        let dd_parts = t_dd.components();
        let comp_edges = |w: usize| dd_parts.component_edge_sets[dd_parts.assignment[w]].clone();
        let mut sigma = match initial {
            Some(s) => s,
            None => self.build(t_prime.edges())?,
        };

        for _ in 0..MAX_ROUNDS {
            let pos = |s: &TreeLikeSystem, m: &SquarefreeMonomial| {
                s.position_of(m).ok_or_else(|| Error::Internal(format!("{m} missing from the system")))
            };
            let is_iso = |s: &TreeLikeSystem, m: &SquarefreeMonomial| -> Result<bool> {
                Ok(s.elements()[pos(s, m)?].is_isolated())
            };
            let vv2_iso = is_iso(&sigma, &vv2)?;
            let mut iso_ws = Vec::new();
            for &w in ws {
                if is_iso(&sigma, &mono(v2, w))? {
                    iso_ws.push(w);
                }
            }

            if vv2_iso {
                if let Some(&w) = iso_ws.first() {
                    let (p0, p1) = (pos(&sigma, &vv2)?, pos(&sigma, &mono(v2, w))?);
                    let head = TreeLikeSystem::new(
                        n_all,
                        vec![TlsElement::isolated(vv2.clone()), pair(vv1.clone(), mono(v2, w))],
                    )?;
                    let rest = sigma.subsequence(&others(sigma.len(), &[p0, p1]))?;
                    self.note(CaseTag::Case1, Some(v), format!("isolated {} and {}", self.edge(v, v2), self.edge(v2, w)));
                    return head.juxtapose(&rest);
                }

                // Case 2: classify the element holding each v2 w_i.
                let mut q1_form = None;
                for &w in ws {
                    let k = pos(&sigma, &mono(v2, w))?;
                    let (between, _) = sigma.between_summand(k)?;
                    if between.contains(v2) {
                        q1_form = Some((w, k, between));
                        break;
                    }
                }
                if let Some((w, k, between)) = q1_form {
                    let (chain, inv) = sigma.invert_chain_ending_at(k, &mono(v2, w))?;
                    sigma = sigma.replace_subsequence(&chain.positions, &inv)?;
                    self.note(
                        CaseTag::Case2_1,
                        Some(v),
                        format!(
                            "inverted a chain of {} elements so that {} is isolated",
                            chain.len(),
                            between.render(self.base.labels())
                        ),
                    );
                    continue;
                }

                let mut reduced = false;
                for &w in ws {
                    let c = comp_edges(w);
                    let mut c_bar = c.clone();
                    c_bar.push(crate::graph::normalize(v2, w));
                    let pd_c = self.pd.value(&c);
                    let pd_c_bar = self.pd.value(&c_bar);
                    if pd_c < pd_c_bar {
                        let inside: BTreeSet<SquarefreeMonomial> = c_bar.iter().map(|&(a, b)| mono(a, b)).collect();
                        let positions: Vec<usize> = (0..sigma.len())
                            .filter(|&i| sigma.elements()[i].summands().all(|m| inside.contains(m)))
                            .collect();
                        let tail = self.build(&c)?;
                        let replacement = TreeLikeSystem::isolated_edges(n_all, &[(v2, w)]).juxtapose(&tail)?;
                        sigma = sigma.replace_subsequence(&positions, &replacement)?;
                        self.note(
                            CaseTag::Case2_2_2,
                            Some(v),
                            format!("rebuilt the component at {} ({} < {})", self.label(w), pd_c, pd_c_bar),
                        );
                        reduced = true;
                        break;
                    }
                }
                if reduced {
                    continue;
                }

                let w = ws[0];
                let (p0, k) = (pos(&sigma, &vv2)?, pos(&sigma, &mono(v2, w))?);
                let xy = sigma.elements()[k]
                    .other(&mono(v2, w))
                    .ok_or_else(|| Error::Internal("expected a two-term element".into()))?
                    .clone();
                let head = TreeLikeSystem::new(
                    n_all,
                    vec![
                        TlsElement::isolated(vv2.clone()),
                        pair(vv1.clone(), mono(v2, w)),
                        TlsElement::isolated(xy.clone()),
                    ],
                )?;
                let rest = sigma.subsequence(&others(sigma.len(), &[p0, k]))?;
                self.note(
                    CaseTag::Case2_2_1,
                    Some(v),
                    format!("split off {} as an isolated summand", xy.render(self.base.labels())),
                );
                return head.juxtapose(&rest);
            }

            // Case 3: vv2 sits in a two-term element q' = vv2 + w z.
            let kq = pos(&sigma, &vv2)?;
            let (gamma, kd) = sigma.between_summand(kq)?;
            let w_top = *gamma
                .vars()
                .iter()
                .find(|&&x| x != v2)
                .ok_or_else(|| Error::Internal("between edge misses v2".into()))?;
            if !gamma.contains(v2) {
                return Err(Error::Internal("edge between vv2 and its partner does not contain v2".into()));
            }
            if sigma.elements()[kd].is_isolated() {
                sigma = sigma.push_to_top(&[kd])?;
            } else {
                let (chain, inv) = sigma.invert_chain_ending_at(kq, &vv2)?;
                sigma = sigma.replace_subsequence(&chain.positions, &inv)?;
            }
            if sigma.elements()[0] != TlsElement::isolated(gamma.clone()) {
                return Err(Error::Internal("normalization did not put v2 w at the top".into()));
            }
            let kq = pos(&sigma, &vv2)?;
            let partner = sigma.elements()[kq]
                .other(&vv2)
                .ok_or_else(|| Error::Internal("vv2 became isolated".into()))?
                .clone();

            if a_prime <= a_dd + 1 {
                let head = TreeLikeSystem::new(
                    n_all,
                    vec![
                        TlsElement::isolated(vv2.clone()),
                        pair(vv1.clone(), gamma.clone()),
                        TlsElement::isolated(partner.clone()),
                    ],
                )?;
                let rest = sigma.subsequence(&others(sigma.len(), &[0, kq]))?;
                self.note(
                    CaseTag::Case3_1a,
                    Some(v),
                    format!("A' = {a_prime} <= A'' + 1 = {}", a_dd + 1),
                );
                return head.juxtapose(&rest);
            }

            let mut other_iso = None;
            for &w in ws {
                if w != w_top && is_iso(&sigma, &mono(v2, w))? {
                    other_iso = Some(w);
                    break;
                }
            }
            if let Some(wj) = other_iso {
                sigma = sigma.interchange(&vv2, &mono(v2, wj)).repair_order()?;
                self.note(CaseTag::Case3_1b, Some(v), format!("interchanged {} and {}", self.edge(v, v2), self.edge(v2, wj)));
                continue;
            }

            // Case 3.2
            if ws.len() == 1 {
                let tail = self.build(t_dd.edges())?;
                sigma = TreeLikeSystem::new(
                    n_all,
                    vec![TlsElement::isolated(vv2.clone()), TlsElement::isolated(mono(v2, ws[0]))],
                )?
                .juxtapose(&tail)?;
                self.note(CaseTag::Case3_2, Some(v), "m = 1: restarted from T''".into());
                continue;
            }
            let mut reduced = false;
            for &w in ws {
                let c = comp_edges(w);
                if c.is_empty() {
                    continue;
                }
                let inside: BTreeSet<SquarefreeMonomial> = c.iter().map(|&(a, b)| mono(a, b)).collect();
                let positions: Vec<usize> = (0..sigma.len())
                    .filter(|&i| sigma.elements()[i].summands().any(|m| inside.contains(m)))
                    .collect();
                let pd_c = self.pd.value(&c);
                if pd_c >= positions.len() {
                    continue;
                }
                let extra: Vec<SquarefreeMonomial> = positions
                    .iter()
                    .flat_map(|&i| sigma.elements()[i].summands())
                    .filter(|m| !inside.contains(*m))
                    .cloned()
                    .collect();
                let [extra] = extra.as_slice() else {
                    return Err(Error::Internal(format!(
                        "component at {} meets {} outside summands",
                        self.label(w),
                        extra.len()
                    )));
                };
                let tail = self.build(&c)?;
                let replacement = TreeLikeSystem::new(n_all, vec![TlsElement::isolated(extra.clone())])?.juxtapose(&tail)?;
                sigma = sigma.replace_subsequence(&positions, &replacement)?;
                self.note(
                    CaseTag::Case3_2,
                    Some(v),
                    format!(
                        "rebuilt the component at {} ({} < {}), isolating {}",
                        self.label(w),
                        pd_c,
                        positions.len(),
                        extra.render(self.base.labels())
                    ),
                );
                reduced = true;
                break;
            }
            if !reduced {
                return Err(Error::Internal("Case 3.2 found no component with a length deficit".into()));
            }
        }
        Err(Error::Internal(format!("no terminal case after {MAX_ROUNDS} rounds at vertex {}", self.label(v))))
    }

    fn edge(&self, u: usize, v: usize) -> String {
        mono(u, v).render(self.base.labels())
    }
}

fn others(len: usize, drop: &[usize]) -> Vec<usize> {
    (0..len).filter(|i| !drop.contains(i)).collect()
}

fn render_edges(f: &Forest) -> String {
    f.edges()
        .iter()
        .map(|&(u, v)| mono(u, v).render(f.labels()))
        .collect::<Vec<_>>()
        .join(", ")
}

/// The printed system for the double star on `a, b, x1..xr, y1..ys`
/// (vertex numbering of [`make_double_star`]).
pub fn double_star_tls(r: usize, s: usize) -> Result<AraCertificate> {
    let pd_value = pd_double_star(r, s)?;
    let f = make_double_star(r, s)?;
    let (a, b) = (0, 1);
    let x = |i: usize| 1 + i;
    let y = |j: usize| 1 + r + j;
    let mut elements = vec![iso(a, b)];
    for i in 1..=r.min(s) {
        elements.push(pair(mono(a, x(i)), mono(b, y(i))));
    }
    for i in r.min(s) + 1..=r {
        elements.push(iso(a, x(i)));
    }
    for j in r.min(s) + 1..=s {
        elements.push(iso(b, y(j)));
    }
    let system = TreeLikeSystem::new(f.n(), elements)?;
    let tag = if s == 0 || r == 0 { CaseTag::StarComponent } else { CaseTag::Matching };
    let cert = AraCertificate {
        claimed_ara: system.len(),
        system,
        pd_value,
        case_log: vec![CaseEntry { tag, vertex: None, detail: format!("double star ({r}, {s}) closed form") }],
    };
    cert.check(f.edges())?;
    Ok(cert)
}

/// The printed system for the path `x1 - .. - xr`, by the residue of `r`
/// modulo 3.
pub fn line_tls(r: usize) -> Result<AraCertificate> {
    let pd_value = pd_line(r)?;
    let f = make_line(r)?;
    // x_i is vertex i - 1.
    let e = |i: usize, j: usize| mono(i - 1, j - 1);
    let s = r / 3;
    let mut elements = Vec::new();
    let blocks = match r % 3 {
        0 => s - 1,
        _ => s,
    };
    for k in 1..=blocks {
        elements.push(TlsElement::isolated(e(3 * k - 1, 3 * k)));
        elements.push(pair(e(3 * k - 2, 3 * k - 1), e(3 * k, 3 * k + 1)));
    }
    match r % 3 {
        0 => {
            elements.push(TlsElement::isolated(e(3 * s - 2, 3 * s - 1)));
            elements.push(TlsElement::isolated(e(3 * s - 1, 3 * s)));
        }
        2 => elements.push(TlsElement::isolated(e(3 * s + 1, 3 * s + 2))),
        _ => {}
    }
    let system = TreeLikeSystem::new(f.n(), elements)?;
    let cert = AraCertificate {
        claimed_ara: system.len(),
        system,
        pd_value,
        case_log: vec![CaseEntry { tag: CaseTag::Matching, vertex: None, detail: format!("line L_{r} closed form") }],
    };
    cert.check(f.edges())?;
    Ok(cert)
}

/// Whether `ara I(L_r)` reaches the bound `mu - rho + 1`.
pub fn bound_is_sharp_line(r: usize) -> Result<bool> {
    let ara = pd_line(r)?;
    let ideal = edge_ideal(&make_line(r)?)?;
    Ok(ara == ideal.ara_upper_bound())
}
