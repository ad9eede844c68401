use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use lratio_core::constants::{
    estimate_sup, fp_delta3, fp_delta3_lp, theorem_c, verify_n3, BarycentricRatio, N3Grid, SupConfig,
};
use lratio_core::cutcone::{enumerate_facets, orbit_classify, FacetNormal};
use lratio_core::json::{
    cut_decomposition_to_json, facets_from_json, facets_to_json, matrix_from_json, metric_from_json,
    metric_kind, orbits_to_json, ratio_from_json, ratio_to_json, subfree_to_json, sup_to_json,
    tree_approx_to_json, tree_from_json, tree_kind, tree_to_json, JsonScalar, ScalarKind,
};
use lratio_core::lorentzian::{is_lorentzian, AnyMatrix, SymMatrix};
use lratio_core::metric::{
    cut_decomposition, delta_tp_violation, four_point_violation, hyperbolicity_delta,
    tree_approx_report, tree_metric, tree_reconstruct, LogMetric, PhyloTree,
};
use lratio_core::ratio::{complete_diagonal, decompose, evaluate, is_bounded, normalize_ratio, FullRatio};
use lratio_core::reproduce::{run_criterion, Scale, CRITERIA};
use lratio_core::scalar::{format_rational, from_f64, parse_rational, Rational, Scalar};
use lratio_core::subfree::subfree_check;

use crate::args::{
    Command, ConjectureCmd, ConstantCmd, CutconeCmd, LorentzianCmd, MetricCmd, MetricInput, RatioCmd,
    ReproduceArgs,
};
use crate::exit;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] lratio_core::Error),
    #[error("cannot access {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Machine-readable code and exit status.
    pub fn classify(&self) -> (&'static str, u8) {
        use lratio_core::Error as E;
        match self {
            CliError::Core(e @ E::ResourceLimit { .. }) => (e.code(), exit::RESOURCE),
            CliError::Core(e @ E::InvariantViolation(_)) => (e.code(), exit::VIOLATION),
            CliError::Core(e) => (e.code(), exit::USAGE),
            CliError::Io { .. } => ("io", exit::USAGE),
            CliError::Usage(_) => ("usage", exit::USAGE),
        }
    }

    pub fn context(&self, command: &str) -> Value {
        let mut ctx = json!({"command": command});
        match self {
            CliError::Core(lratio_core::Error::ResourceLimit { progress, .. }) => {
                ctx["progress"] = json!({
                    "inequalities_processed": progress.inequalities_processed,
                    "inequalities_total": progress.inequalities_total,
                    "rays": progress.rays,
                });
            }
            CliError::Io { path, .. } => ctx["path"] = json!(path),
            _ => {}
        }
        ctx
    }
}

type CliResult<T> = Result<T, CliError>;

pub struct Outcome {
    pub results: Value,
    /// A checked property failed; the results carry the certificate.
    pub violation: bool,
}

impl Outcome {
    fn ok(results: Value) -> Self {
        Self { results, violation: false }
    }
}

/// Per-run state: the seed and the digests of every file read.
pub struct Context {
    argv: Vec<String>,
    files: BTreeMap<String, String>,
    pub seed: u64,
}

impl Context {
    pub fn new(argv: &[String], seed: u64) -> Self {
        Self {
            argv: argv.to_vec(),
            files: BTreeMap::new(),
            seed,
        }
    }

    fn read_json(&mut self, path: &Path) -> CliResult<Value> {
        let shown = path.display().to_string();
        let bytes = std::fs::read(path).map_err(|source| CliError::Io {
            path: shown.clone(),
            source,
        })?;
        self.files.insert(shown, hex::encode(Sha256::digest(&bytes)));
        let text = String::from_utf8(bytes)
            .map_err(|_| lratio_core::Error::Parse(format!("{} is not UTF-8", path.display())))?;
        Ok(lratio_core::json::parse(&text)?)
    }

    /// Flags, file digests, and one digest over both.
    pub fn inputs(&self) -> Value {
        let mut h = Sha256::new();
        for a in &self.argv {
            h.update(a.as_bytes());
            h.update([0]);
        }
        for (path, digest) in &self.files {
            h.update(path.as_bytes());
            h.update([0]);
            h.update(digest.as_bytes());
            h.update([0]);
        }
        json!({"argv": self.argv, "files": self.files, "digest": hex::encode(h.finalize())})
    }
}

pub fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Lorentzian(LorentzianCmd::Check { .. }) => "lorentzian check",
        Command::Cutcone(CutconeCmd::Facets { .. }) => "cutcone facets",
        Command::Ratio(RatioCmd::Check { .. }) => "ratio check",
        Command::Ratio(RatioCmd::Eval { .. }) => "ratio eval",
        Command::Ratio(RatioCmd::Decompose { .. }) => "ratio decompose",
        Command::Ratio(RatioCmd::Normalize { .. }) => "ratio normalize",
        Command::Metric(MetricCmd::Check { .. }) => "metric check",
        Command::Metric(MetricCmd::Delta { .. }) => "metric delta",
        Command::Metric(MetricCmd::Treeapprox { .. }) => "metric treeapprox",
        Command::Metric(MetricCmd::Decompose { .. }) => "metric decompose",
        Command::Constant(ConstantCmd::N3 { .. }) => "constant n3",
        Command::Constant(ConstantCmd::Tp { .. }) => "constant tp",
        Command::Constant(ConstantCmd::Estimate { .. }) => "constant estimate",
        Command::Conjecture(ConjectureCmd::Subfree { .. }) => "conjecture subfree",
        Command::Reproduce(_) => "reproduce",
    }
}

pub fn run(cmd: &Command, ctx: &mut Context) -> CliResult<Outcome> {
    match cmd {
        Command::Lorentzian(LorentzianCmd::Check { matrix }) => {
            let m = matrix_from_json(&ctx.read_json(matrix)?)?;
            let report = is_lorentzian(&m);
            Ok(Outcome::ok(json!({
                "n": m.n(),
                "scalar": scalar_name(&m),
                "lorentzian": report.lorentzian,
                "signature": report.signature,
            })))
        }
        Command::Cutcone(CutconeCmd::Facets { n, orbits, out }) => cutcone_facets(*n, *orbits, out.as_deref()),
        Command::Ratio(cmd) => ratio(cmd, ctx),
        Command::Metric(cmd) => metric(cmd, ctx),
        Command::Constant(cmd) => constant(cmd, ctx),
        Command::Conjecture(ConjectureCmd::Subfree { n, which }) => subfree(*n, which.facet_index, which.all),
        Command::Reproduce(args) => reproduce(args, ctx.seed),
    }
}

fn scalar_name(m: &AnyMatrix) -> &'static str {
    match m {
        AnyMatrix::Rational(_) => "rational",
        AnyMatrix::Float(_) => "float",
    }
}

fn cutcone_facets(n: usize, orbits: bool, out: Option<&Path>) -> CliResult<Outcome> {
    let facets = enumerate_facets(n)?;
    let list = facets_to_json(n, &facets);
    let mut results = json!({"n": n, "total": facets.len()});
    match out {
        Some(path) => {
            let text = serde_json::to_string_pretty(&list).expect("JSON values serialize");
            std::fs::write(path, text + "\n").map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            results["out"] = json!(path.display().to_string());
        }
        None => {
            results["pairs"] = list["pairs"].clone();
            results["facets"] = list["facets"].clone();
        }
    }
    if orbits {
        results["orbits"] = orbits_to_json(&orbit_classify(n, &facets)?);
    }
    Ok(Outcome::ok(results))
}

fn ratio(cmd: &RatioCmd, ctx: &mut Context) -> CliResult<Outcome> {
    match cmd {
        RatioCmd::Check { ratio } => {
            let r = ratio_from_json(&ctx.read_json(ratio)?)?;
            let cert = is_bounded(&r.reduced())?;
            Ok(Outcome::ok(json!({
                "n": r.n(),
                "integral": r.is_integral(),
                "bounded": cert.bounded,
                "violating_subset": cert.violating_subset,
                "tight_subsets": cert.tight_subsets,
            })))
        }
        RatioCmd::Eval { ratio, matrix } => {
            let r = ratio_from_json(&ctx.read_json(ratio)?)?;
            let m = matrix_from_json(&ctx.read_json(matrix)?)?;
            let e = evaluate(&r, &m)?;
            Ok(Outcome::ok(json!({
                "exact": e.exact.as_ref().map(format_rational),
                "value": e.value,
                "zero_pow_zero": e.zero_pow_zero,
            })))
        }
        RatioCmd::Decompose { ratio, basis } => {
            let r = ratio_from_json(&ctx.read_json(ratio)?)?;
            let basis: Vec<FacetNormal> = match basis {
                Some(path) => facets_from_json(&ctx.read_json(path)?)?.1,
                None => enumerate_facets(r.n())?,
            };
            let found = decompose(&r, &basis)?;
            let terms: Option<Vec<Value>> = found.map(|parts| {
                parts
                    .into_iter()
                    .map(|(k, c)| json!({"index": k + 1, "facet": basis[k].coords, "coefficient": c}))
                    .collect()
            });
            Ok(Outcome::ok(json!({
                "n": r.n(),
                "basis_size": basis.len(),
                "decomposable": terms.is_some(),
                "terms": terms,
            })))
        }
        RatioCmd::Normalize { ratio } => {
            let r = ratio_from_json(&ctx.read_json(ratio)?)?;
            let normal = complete_diagonal(&normalize_ratio(&r.reduced())?);
            Ok(Outcome::ok(json!({"ratio": ratio_to_json(&normal)})))
        }
    }
}

/// A metric whose scalar kind comes from the input document.
enum AnyMetric {
    Rational(LogMetric<Rational>),
    Float(LogMetric<f64>),
}

enum AnyTree {
    Rational(PhyloTree<Rational>),
    Float(PhyloTree<f64>),
}

fn load_tree(ctx: &mut Context, path: &Path) -> CliResult<AnyTree> {
    let v = ctx.read_json(path)?;
    Ok(match tree_kind(&v)? {
        ScalarKind::Rational => AnyTree::Rational(tree_from_json(&v)?),
        ScalarKind::Float => AnyTree::Float(tree_from_json(&v)?),
    })
}

fn load_metric(ctx: &mut Context, input: &MetricInput) -> CliResult<AnyMetric> {
    if let Some(path) = &input.metric {
        let v = ctx.read_json(path)?;
        return Ok(match metric_kind(&v)? {
            ScalarKind::Rational => AnyMetric::Rational(metric_from_json(&v)?),
            ScalarKind::Float => AnyMetric::Float(metric_from_json(&v)?),
        });
    }
    if let Some(path) = &input.matrix {
        let m = matrix_from_json(&ctx.read_json(path)?)?;
        return Ok(AnyMetric::Float(LogMetric::from_matrix(&m.to_f64())?));
    }
    let path = input.tree.as_ref().expect("clap requires one metric input");
    Ok(match load_tree(ctx, path)? {
        AnyTree::Rational(t) => AnyMetric::Rational(tree_metric(&t)),
        AnyTree::Float(t) => AnyMetric::Float(tree_metric(&t)),
    })
}

/// `exp d` with unit diagonal.
fn exp_matrix<T: Scalar>(d: &LogMetric<T>) -> SymMatrix<f64> {
    SymMatrix::from_upper(d.n(), |i, j| if i == j { 1.0 } else { d.get(i, j).to_f64().exp() })
}

fn parse_p(text: &str) -> CliResult<Rational> {
    if let Ok(p) = parse_rational(text) {
        return Ok(p);
    }
    let f: f64 = text
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("invalid value for --p: {text:?}")))?;
    Ok(from_f64(f)?)
}

fn one_based(q: [usize; 4]) -> [usize; 4] {
    q.map(|i| i + 1)
}

fn delta_json<T: JsonScalar>(d: &LogMetric<T>) -> Value {
    json!({
        "n": d.n(),
        "scalar": T::KIND,
        "delta": hyperbolicity_delta(d).to_json(),
        "four_point": four_point_violation(d).is_none(),
        "four_point_violation": four_point_violation(d).map(one_based),
    })
}

fn treeapprox_json<T: JsonScalar>(d: &LogMetric<T>, basepoint: usize) -> CliResult<Outcome> {
    let k = basepoint
        .checked_sub(1)
        .ok_or_else(|| CliError::Usage("--basepoint is 1-based".into()))?;
    let r = tree_approx_report(d, k)?;
    // tree-ness and d' <= d are guaranteed; the log2 bound is reported only
    let violation = !(r.is_tree && r.below_input);
    Ok(Outcome {
        results: tree_approx_to_json(&r),
        violation,
    })
}

fn decompose_json<T: JsonScalar>(tree: &PhyloTree<T>, root: usize) -> CliResult<Outcome> {
    let k = root
        .checked_sub(1)
        .ok_or_else(|| CliError::Usage("--root is 1-based".into()))?;
    let dec = cut_decomposition(tree, k)?;
    let resums = dec.to_metric().max_gap(&tree_metric(tree)).is_zero_tol()
        && tree_metric(tree).max_gap(&dec.to_metric()).is_zero_tol();
    Ok(Outcome {
        results: json!({
            "tree": tree_to_json(tree),
            "decomposition": cut_decomposition_to_json(&dec),
            "resums": resums,
        }),
        violation: !resums,
    })
}

fn metric(cmd: &MetricCmd, ctx: &mut Context) -> CliResult<Outcome> {
    match cmd {
        MetricCmd::Check { p, input } => {
            let p = parse_p(p)?;
            let m: AnyMatrix = match &input.matrix {
                Some(path) => matrix_from_json(&ctx.read_json(path)?)?,
                None => match load_metric(ctx, input)? {
                    AnyMetric::Rational(d) => exp_matrix(&d).into(),
                    AnyMetric::Float(d) => exp_matrix(&d).into(),
                },
            };
            let violation = delta_tp_violation(&m, &p)?;
            Ok(Outcome::ok(json!({
                "n": m.n(),
                "p": format_rational(&p),
                "in_delta_tp": violation.is_none(),
                "violation": violation.map(one_based),
            })))
        }
        MetricCmd::Delta { input } => Ok(Outcome::ok(match load_metric(ctx, input)? {
            AnyMetric::Rational(d) => delta_json(&d),
            AnyMetric::Float(d) => delta_json(&d),
        })),
        MetricCmd::Treeapprox { basepoint, input } => match load_metric(ctx, input)? {
            AnyMetric::Rational(d) => treeapprox_json(&d, *basepoint),
            AnyMetric::Float(d) => treeapprox_json(&d, *basepoint),
        },
        MetricCmd::Decompose { root, input } => {
            if let Some(path) = &input.tree {
                return match load_tree(ctx, path)? {
                    AnyTree::Rational(t) => decompose_json(&t, *root),
                    AnyTree::Float(t) => decompose_json(&t, *root),
                };
            }
            match load_metric(ctx, input)? {
                AnyMetric::Rational(d) => decompose_json(&tree_reconstruct(&d)?, *root),
                AnyMetric::Float(d) => decompose_json(&tree_reconstruct(&d)?, *root),
            }
        }
    }
}

fn barycentric(a: &str, b: &str, c: &str) -> CliResult<BarycentricRatio> {
    if let (Ok(x), Ok(y), Ok(z)) = (parse_rational(a), parse_rational(b), parse_rational(c)) {
        return Ok(BarycentricRatio::from_rationals(&x, &y, &z)?);
    }
    let f = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("invalid barycentric coordinate {s:?}")))
    };
    Ok(BarycentricRatio::new(f(a)?, f(b)?, f(c)?)?)
}

/// Agreement required between the closed form and the optimiser.
const N3_TOL: f64 = 1e-6;
const TP_TOL: f64 = 1e-9;

fn constant(cmd: &ConstantCmd, ctx: &mut Context) -> CliResult<Outcome> {
    match cmd {
        ConstantCmd::N3 { a, b, c, verify } => {
            let q = barycentric(a, b, c)?;
            let value = theorem_c(&q);
            let mut results = json!({
                "a": q.a,
                "b": q.b,
                "c": q.c,
                "discriminant": q.discriminant(),
                "inside_circle": q.discriminant() <= 0.0,
                "constant": value,
            });
            let mut violation = false;
            if *verify {
                let scanned = verify_n3(&q, N3Grid::default());
                let diff = (value - scanned).abs();
                violation = diff > N3_TOL;
                results["verify"] = json!({"optimizer": scanned, "abs_diff": diff, "agrees": !violation});
            }
            Ok(Outcome { results, violation })
        }
        ConstantCmd::Tp { p, a, b, c } => {
            let closed = fp_delta3(*a, *b, *c, *p)?;
            let lp = fp_delta3_lp(*a, *b, *c, *p)?;
            let gap = (closed - lp).abs() / closed;
            Ok(Outcome {
                results: json!({"constant": closed, "lp": lp, "relative_gap": gap}),
                violation: gap > TP_TOL,
            })
        }
        ConstantCmd::Estimate { ratio, iters } => {
            let r: FullRatio = ratio_from_json(&ctx.read_json(ratio)?)?;
            let config = SupConfig {
                iterations: *iters,
                seed: ctx.seed,
                ..SupConfig::default()
            };
            Ok(Outcome::ok(sup_to_json(&estimate_sup(&r, &config)?)))
        }
    }
}

fn subfree(n: usize, index: Option<usize>, all: bool) -> CliResult<Outcome> {
    let facets = enumerate_facets(n)?;
    let chosen: Vec<usize> = if all {
        (0..facets.len()).collect()
    } else {
        let k = index.expect("clap requires --facet-index or --all");
        if k == 0 || k > facets.len() {
            return Err(CliError::Usage(format!(
                "--facet-index {k} outside [1, {}]",
                facets.len()
            )));
        }
        vec![k - 1]
    };
    let reports = chosen
        .par_iter()
        .map(|&k| {
            let r = complete_diagonal(&lratio_core::ratio::ReducedRatio::from_facet(&facets[k]));
            subfree_check(&r).map(|rep| (k, rep))
        })
        .collect::<lratio_core::Result<Vec<_>>>()?;
    let holds_all = reports.iter().all(|(_, r)| r.holds);
    let list: Vec<Value> = reports
        .iter()
        .map(|(k, r)| json!({"index": k + 1, "facet": facets[*k].coords, "report": subfree_to_json(r)}))
        .collect();
    Ok(Outcome {
        results: json!({"n": n, "checked": list.len(), "holds_all": holds_all, "reports": list}),
        violation: !holds_all,
    })
}

fn reproduce(args: &ReproduceArgs, seed: u64) -> CliResult<Outcome> {
    let ids: Vec<u8> = if args.all {
        CRITERIA.iter().map(|&(id, _)| id).collect()
    } else {
        args.criterion.clone()
    };
    let scale = if args.quick { Scale::quick() } else { Scale::full() };
    let mut criteria = Vec::new();
    let mut passed = 0;
    for id in ids {
        let o = run_criterion(id, seed, &scale)?;
        // timings vary between runs, so they go to stderr and not into the results
        eprintln!("{}", o.line());
        passed += usize::from(o.passed);
        criteria.push(json!({"id": o.id, "name": o.name, "passed": o.passed, "detail": o.detail}));
    }
    let total = criteria.len();
    Ok(Outcome {
        results: json!({
            "scale": if args.quick { "quick" } else { "full" },
            "criteria": criteria,
            "passed": passed,
            "total": total,
        }),
        violation: passed < total,
    })
}
