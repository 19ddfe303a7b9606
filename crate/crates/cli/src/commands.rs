use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use forest_ara::{
    build_stretched_tls, double_star_resolution, double_star_tls, edge_ideal, line_tls, parse_edge_list,
    parse_generators, pd_double_star, pd_forest, pd_line, sv_check as check_partition, tls_to_partition,
    tls_vanishing_check_prime, write_edge_list, AraCertificate, Error, Forest, LyubeznikComplex, Monomial,
    SvPartition, TreeLikeSystem,
};
use serde_json::{json, Value};

use crate::input::{self, detect_double_star, fill_labels, Family, PartitionInput, Source};
use crate::{Check, ForestSource, OracleArgs, Order};

pub struct Outcome {
    pub digest: String,
    pub results: Value,
    pub text: String,
    /// False when a verification failed (exit code 1).
    pub passed: bool,
}

#[derive(Default)]
pub struct Timer {
    phases: Vec<(String, f64)>,
}

impl Timer {
    pub fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.phases.push((name.to_string(), t.elapsed().as_secs_f64() * 1e3));
        out
    }

    pub fn finish(self, start: Instant) -> Value {
        let phases: serde_json::Map<String, Value> = self.phases.into_iter().map(|(k, v)| (k, json!(v))).collect();
        json!({ "total_ms": start.elapsed().as_secs_f64() * 1e3, "phases": phases })
    }
}

fn core_error(err: &anyhow::Error) -> Option<&Error> {
    err.chain().find_map(|e| e.downcast_ref::<Error>())
}

/// 3 for internal errors, 2 for everything else (bad input).
pub fn exit_code(err: &anyhow::Error) -> u8 {
    match core_error(err) {
        Some(Error::Internal(_)) => 3,
        _ => 2,
    }
}

pub fn error_kind(err: &anyhow::Error) -> String {
    match core_error(err) {
        Some(e) => {
            let dbg = format!("{e:?}");
            dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
        }
        None if err.chain().any(|e| e.downcast_ref::<std::io::Error>().is_some()) => "Io".into(),
        None => "Input".into(),
    }
}

struct LoadedForest {
    forest: Forest,
    digest: String,
    family: Option<Family>,
}

fn load_forest(source: &ForestSource) -> Result<LoadedForest> {
    if let Some(words) = &source.family {
        let family = Family::parse(words)?;
        return Ok(LoadedForest { forest: family.forest()?, digest: family.digest(), family: Some(family) });
    }
    let path = source.input.as_deref().expect("clap requires --input or --family");
    let Source { text, digest } = input::read_source(path)?;
    let forest = parse_edge_list(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(LoadedForest { forest, digest, family: None })
}

pub fn pd(source: &ForestSource, timer: &mut Timer) -> Result<Outcome> {
    let LoadedForest { forest, digest, family } = load_forest(source)?;
    let result = timer.time("pd", || pd_forest(&forest));
    let closed_form = match family {
        Some(Family::Line(r)) => Some(pd_line(r)?),
        Some(Family::DoubleStar(r, s)) if r + s >= 1 => Some(pd_double_star(r, s)?),
        Some(Family::Star(r)) => Some(r),
        _ => None,
    };
    let passed = closed_form.is_none_or(|c| c == result.value);
    let mut text = format!("pd = {}\n", result.value);
    if let Some(c) = closed_form {
        writeln!(text, "closed form = {c}").unwrap();
    }
    text.push_str(&result.render_text(forest.labels()));
    let results = json!({
        "value": result.value,
        "vertices": forest.n(),
        "edges": forest.edge_count(),
        "closed_form": closed_form,
        "labels": forest.labels(),
        "trace": result.trace,
    });
    Ok(Outcome { digest, results, text, passed })
}

fn not_stretched_hint(forest: &Forest) -> String {
    match detect_double_star(forest) {
        Some((r, s)) => format!(
            "cannot build a certificate for the double star T_{{{r},{s}}} from an edge list (use --family double-star {r} {s})"
        ),
        None => "edge-list input must be stretched (use --family for double stars and lines)".into(),
    }
}

fn certificate_for(loaded: &LoadedForest) -> Result<AraCertificate> {
    match loaded.family {
        Some(Family::DoubleStar(r, s)) => Ok(double_star_tls(r, s)?),
        Some(Family::Line(r)) => Ok(line_tls(r)?),
        _ => match build_stretched_tls(&loaded.forest) {
            Err(Error::NotStretched) => {
                Err(anyhow!(Error::NotStretched).context(not_stretched_hint(&loaded.forest)))
            }
            other => Ok(other?),
        },
    }
}

fn sv_result(system: &TreeLikeSystem) -> Result<(bool, Value)> {
    let partition = tls_to_partition(system)?;
    Ok(match check_partition(&partition) {
        Ok(()) => (true, json!({ "ok": true, "blocks": partition.blocks.len() })),
        Err(v) => (false, json!({ "ok": false, "blocks": partition.blocks.len(), "violation": v, "message": v.to_string() })),
    })
}

/// Runs every prime; a prime over the cap is reported as skipped.
fn oracle_results(system: &TreeLikeSystem, args: &OracleArgs, strict_cap: bool) -> Result<(bool, Vec<Value>)> {
    let mut ok = true;
    let mut out = Vec::new();
    for &p in &args.fields {
        match tls_vanishing_check_prime(system, p, args.cap) {
            Ok(r) => {
                ok &= r.equal;
                out.push(serde_json::to_value(&r)?);
            }
            Err(e @ Error::CapExceeded { .. }) if !strict_cap => {
                out.push(json!({ "prime": p, "skipped": e.to_string() }));
            }
            Err(e @ Error::CapExceeded { .. }) => {
                return Err(anyhow!(e).context("raise the limit with --cap N"));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok((ok, out))
}

fn oracle_text(reports: &[Value]) -> String {
    let mut text = String::new();
    for r in reports {
        if let Some(reason) = r.get("skipped") {
            writeln!(text, "oracle F_{}: skipped ({})", r["prime"], reason.as_str().unwrap_or("")).unwrap();
        } else {
            let verdict = if r["equal"] == json!(true) { "equal" } else { "DIFFERENT" };
            writeln!(text, "oracle F_{}: {verdict} over {} points in {} variables", r["prime"], r["points"], r["nvars"])
                .unwrap();
            if let Some(w) = r.get("witness").filter(|w| !w.is_null()) {
                writeln!(text, "  witness {} ({})", w["point"], w["kind"].as_str().unwrap_or("")).unwrap();
            }
        }
    }
    text
}

fn chain_shape(system: &TreeLikeSystem) -> Option<Vec<usize>> {
    system.decompose_strict().ok().map(|cs| cs.iter().map(|c| c.len()).collect())
}

pub fn ara(
    source: &ForestSource,
    verify: &[Check],
    oracle: &OracleArgs,
    tls_out: Option<&Path>,
    timer: &mut Timer,
) -> Result<Outcome> {
    let loaded = load_forest(source)?;
    let forest = &loaded.forest;
    let cert = timer.time("build", || certificate_for(&loaded))?;
    let labels = forest.labels();
    let mut passed = true;
    let cert_check = cert.check(forest.edges());
    passed &= cert_check.is_ok();
    let invariants = edge_ideal(forest)?.invariants();
    let mut verification = serde_json::Map::new();
    let mut text = cert.render_text(labels);
    writeln!(
        text,
        "mu = {}, nu = {}, rho = {}, mu - rho + 1 = {}",
        invariants.mu, invariants.nu, invariants.rho, invariants.upper_bound
    )
    .unwrap();
    if let Err(e) = &cert_check {
        writeln!(text, "certificate check FAILED: {e}").unwrap();
    }
    if verify.contains(&Check::Sv) {
        let (ok, v) = timer.time("sv", || sv_result(&cert.system))?;
        passed &= ok;
        writeln!(text, "sv check: {}", if ok { "pass" } else { "FAIL" }).unwrap();
        if let Some(m) = v.get("message") {
            writeln!(text, "  {}", m.as_str().unwrap_or("")).unwrap();
        }
        verification.insert("sv".into(), v);
    }
    if verify.contains(&Check::Oracle) {
        let (ok, reports) = timer.time("oracle", || oracle_results(&cert.system, oracle, false))?;
        passed &= ok;
        text.push_str(&oracle_text(&reports));
        verification.insert("oracle".into(), Value::Array(reports));
    }
    if let Some(path) = tls_out {
        std::fs::write(path, serde_json::to_string_pretty(&cert.system)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let results = json!({
        "length": cert.system.len(),
        "pd": cert.pd_value,
        "family": loaded.family.map(|f| f.describe()),
        "invariants": invariants,
        "labels": labels,
        "certificate": cert,
        "certificate_ok": cert_check.is_ok(),
        "elements": cert.system.elements().iter().map(|e| e.render(labels)).collect::<Vec<_>>(),
        "strict_chains": chain_shape(&cert.system),
        "verification": verification,
    });
    Ok(Outcome { digest: loaded.digest, results, text, passed })
}

fn label_edges(system: &TreeLikeSystem, labels: &[String]) -> BTreeSet<(String, String)> {
    let labels = fill_labels(labels, system.nvars());
    system
        .support()
        .iter()
        .map(|m| {
            let mut names: Vec<String> = m.vars().iter().map(|&x| labels[x].clone()).collect();
            names.sort();
            let second = names.get(1).cloned().unwrap_or_default();
            (names[0].clone(), second)
        })
        .collect()
}

pub fn tls_verify(path: &Path, forest: Option<&Path>, timer: &mut Timer) -> Result<Outcome> {
    let src = input::read_source(path)?;
    let sys = input::parse_system(&src.text)?;
    let system = &sys.system;
    let labels = fill_labels(&sys.labels, system.nvars());
    let validity = system.validate();
    let support = system.check_forest_support();
    let shape = timer.time("decompose", || chain_shape(system));
    let mut passed = validity.is_ok();
    let mut text = system.render_text(&labels);
    writeln!(text, "length {}", system.len()).unwrap();
    match &validity {
        Ok(()) => writeln!(text, "valid: yes").unwrap(),
        Err(v) => writeln!(text, "valid: NO ({v})").unwrap(),
    }
    writeln!(text, "forest support: {}", support.as_ref().map_or_else(|e| e.to_string(), |_| "yes".into())).unwrap();
    writeln!(text, "strict: {}", system.is_strict()).unwrap();
    if let Some(s) = &shape {
        writeln!(text, "strict chains: {s:?}").unwrap();
    }
    let mut matches_forest = Value::Null;
    if let Some(fp) = forest {
        let fsrc = input::read_source(fp)?;
        let f = parse_edge_list(&fsrc.text).with_context(|| format!("parsing {}", fp.display()))?;
        let want: BTreeSet<(String, String)> = f
            .edges()
            .iter()
            .map(|&(u, v)| {
                let mut p = [f.label(u).to_string(), f.label(v).to_string()];
                p.sort();
                let [a, b] = p;
                (a, b)
            })
            .collect();
        let same = label_edges(system, &sys.labels) == want;
        passed &= same;
        writeln!(text, "support equals {}: {}", fp.display(), if same { "yes" } else { "NO" }).unwrap();
        matches_forest = json!(same);
    }
    let results = json!({
        "length": system.len(),
        "valid": validity.is_ok(),
        "violation": validity.as_ref().err(),
        "forest_support": support.is_ok(),
        "forest_support_error": support.as_ref().err().map(|e| e.to_string()),
        "strict": system.is_strict(),
        "strict_chains": shape,
        "support_matches_forest": matches_forest,
    });
    Ok(Outcome { digest: src.digest, results, text, passed })
}

pub fn sv_check(path: &Path, timer: &mut Timer) -> Result<Outcome> {
    let src = input::read_source(path)?;
    let partition = match input::parse_partition_or_system(&src.text)? {
        PartitionInput::Partition(p) => p,
        // An invalid system still gets checked, block per element in order.
        PartitionInput::System(s) => tls_to_partition(&s.system).unwrap_or_else(|_| {
            let blocks = s.system.elements().iter().map(|e| e.summands().cloned().collect()).collect();
            SvPartition::new(s.system.support().into_iter().collect(), blocks)
        }),
    };
    let verdict = timer.time("sv", || check_partition(&partition));
    let text = match &verdict {
        Ok(()) => format!("sv check: pass ({} blocks)\n", partition.blocks.len()),
        Err(v) => format!("sv check: FAIL ({v})\n"),
    };
    let results = json!({
        "ok": verdict.is_ok(),
        "blocks": partition.blocks.len(),
        "violation": verdict.as_ref().err(),
        "partition": partition,
    });
    Ok(Outcome { digest: src.digest, passed: verdict.is_ok(), results, text })
}

pub fn oracle(path: &Path, args: &OracleArgs, timer: &mut Timer) -> Result<Outcome> {
    let src = input::read_source(path)?;
    let sys = input::parse_system(&src.text)?;
    let (ok, reports) = timer.time("oracle", || oracle_results(&sys.system, args, true))?;
    let text = oracle_text(&reports);
    let results = json!({ "equal": ok, "reports": reports });
    Ok(Outcome { digest: src.digest, results, text, passed: ok })
}

/// Sort key for a variable name: alphabetic prefix, then the numeric suffix,
/// so `x2` precedes `x10`.
fn name_key(label: &str) -> (String, u64, String) {
    let prefix = label.trim_end_matches(|c: char| c.is_ascii_digit());
    let num = label[prefix.len()..].parse().unwrap_or(0);
    (prefix.to_string(), num, label.to_string())
}

/// Renumbers the variables by name, then sorts in lex order with the first
/// variable largest; larger monomials first.
fn lex_sort(monomials: &mut [Monomial], labels: &mut Vec<String>) {
    let n = monomials.iter().filter_map(Monomial::max_var).max().map_or(0, |m| m + 1);
    let old = fill_labels(labels, n);
    let mut vars: Vec<usize> = (0..n).collect();
    vars.sort_by_key(|&x| name_key(&old[x]));
    let mut rank = vec![0; n];
    for (new, &x) in vars.iter().enumerate() {
        rank[x] = new;
    }
    for m in monomials.iter_mut() {
        *m = Monomial::from_exponents(m.exponents().iter().map(|(&x, &e)| (rank[x], e)));
    }
    *labels = vars.iter().map(|&x| old[x].clone()).collect();
    monomials.sort_by(|a, b| {
        (0..n)
            .map(|x| b.exponent(x).cmp(&a.exponent(x)))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    });
}

pub fn resolution(
    gens: Option<&Path>,
    family: Option<&[String]>,
    order: Order,
    matrices: bool,
    timer: &mut Timer,
) -> Result<Outcome> {
    let (mut monomials, mut labels, digest) = match (gens, family) {
        (Some(path), _) => {
            let src = input::read_source(path)?;
            let g = parse_generators(&src.text).with_context(|| format!("parsing {}", path.display()))?;
            (g.monomials, g.labels, src.digest)
        }
        (None, Some(words)) => {
            let fam = Family::parse(words)?;
            let forest = fam.forest()?;
            let monos: Vec<Monomial> = match fam {
                Family::DoubleStar(r, s) => double_star_resolution(r, s)?.generators().to_vec(),
                _ => edge_ideal(&forest)?.generators().iter().map(Monomial::from).collect(),
            };
            (monos, forest.labels().to_vec(), fam.digest())
        }
        (None, None) => bail!("give --gens FILE or --family NAME ARGS"),
    };
    if order == Order::Lex {
        lex_sort(&mut monomials, &mut labels);
    }
    let c = timer.time("resolution", || LyubeznikComplex::new(monomials))?;
    let is_complex = timer.time("d_squared", || c.is_complex());
    let minimal = c.is_minimal();
    let betti = c.betti_numbers().ok();
    let linear = c.linearity_check().ok();
    let gens_text: Vec<String> = c.generators().iter().map(|m| m.render(&labels)).collect();
    let mut text = format!("generators: {}\n", gens_text.join(", "));
    writeln!(text, "ranks: {:?}", c.ranks()).unwrap();
    match &betti {
        Some(b) => {
            for (t, v) in b.iter().enumerate() {
                writeln!(text, "beta_{} = {v}", t + 1).unwrap();
            }
            writeln!(text, "pd = {}", b.len()).unwrap();
        }
        None => writeln!(text, "not minimal: ranks overestimate the Betti numbers").unwrap(),
    }
    writeln!(text, "minimal: {minimal}").unwrap();
    if let Some(l) = linear {
        writeln!(text, "2-linear: {l}").unwrap();
    }
    writeln!(text, "d^2 = 0: {is_complex}").unwrap();
    let mut results = json!({
        "generators": gens_text,
        "labels": labels,
        "ranks": c.ranks(),
        "betti": betti,
        "projective_dimension": betti.as_ref().map(Vec::len),
        "minimal": minimal,
        "linear": linear,
        "is_complex": is_complex,
        "euler_characteristic": c.euler_characteristic(),
    });
    if matrices {
        let mats: Vec<Value> = (1..=c.max_dim())
            .map(|t| {
                let d = c.differential(t).expect("t in range");
                let name = |s: &Vec<usize>| if s.is_empty() { "1".to_string() } else { c.render_symbol(s, &labels) };
                json!({
                    "t": t,
                    "rows": c.symbols(t).iter().map(name).collect::<Vec<_>>(),
                    "cols": c.symbols(t - 1).iter().map(name).collect::<Vec<_>>(),
                    "dense": d.render_dense(&labels),
                })
            })
            .collect();
        for m in &mats {
            writeln!(text, "d_{}:", m["t"]).unwrap();
            for row in m["dense"].as_array().into_iter().flatten() {
                let cells: Vec<&str> = row.as_array().into_iter().flatten().filter_map(Value::as_str).collect();
                writeln!(text, "  [{}]", cells.join(", ")).unwrap();
            }
        }
        results["matrices"] = Value::Array(mats);
    }
    Ok(Outcome { digest, results, text, passed: is_complex })
}

pub fn family(args: &[String], timer: &mut Timer) -> Result<Outcome> {
    let fam = Family::parse(args)?;
    let forest = fam.forest()?;
    let pd = timer.time("pd", || pd_forest(&forest)).value;
    let invariants = edge_ideal(&forest)?.invariants();
    let closed_form = match fam {
        Family::Star(r) => Some(r),
        Family::Line(r) => Some(pd_line(r)?),
        Family::DoubleStar(r, s) if r + s >= 1 => Some(pd_double_star(r, s)?),
        Family::DoubleStar(..) => None,
    };
    let edge_list = write_edge_list(&forest);
    let mut text = edge_list.clone();
    writeln!(text, "# {}: pd {pd}, mu {}, rho {}, mu - rho + 1 = {}", fam.describe(), invariants.mu, invariants.rho, invariants.upper_bound)
        .unwrap();
    let results = json!({
        "family": fam.describe(),
        "edge_list": edge_list,
        "labels": forest.labels(),
        "pd": pd,
        "closed_form": closed_form,
        "invariants": invariants,
        "bound_is_sharp": invariants.upper_bound == pd,
        "stretched": forest.is_stretched(),
    });
    let passed = closed_form.is_none_or(|c| c == pd);
    Ok(Outcome { digest: fam.digest(), results, text, passed })
}
