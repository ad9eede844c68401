//! JSON formats for matrices, facet lists, ratios, metrics, trees and reports.
//!
//! Rationals are written as `"p/q"` strings in lowest terms (`"/1"` kept) and
//! floats as JSON numbers. Pairs are keyed by 1-based `"i,j"` labels.

use serde_json::{json, Map, Value};

use crate::constants::SupEstimate;
use crate::cutcone::{pair_count, pair_index, pair_labels, FacetNormal, OrbitReport};
use crate::error::{Error, Result};
use crate::lorentzian::{AnyMatrix, SymMatrix};
use crate::metric::{CutDecomposition, LogMetric, PhyloTree, TreeApproxReport, TreeEdge};
use crate::ratio::{complete_diagonal, FullRatio, ReducedRatio};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};
use crate::subfree::SubfreeReport;

/// A scalar with a JSON encoding.
pub trait JsonScalar: Scalar {
    const KIND: &'static str;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

impl JsonScalar for Rational {
    const KIND: &'static str = "rational";

    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(num) if num.is_i64() || num.is_u64() => parse_rational(&num.to_string()),
            _ => Err(Error::Parse(format!("expected a rational \"p/q\", got {v}"))),
        }
    }
}

impl JsonScalar for f64 {
    const KIND: &'static str = "float";

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self).map_or(Value::Null, Value::Number)
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(num) => num
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("number {num} out of range"))),
            Value::String(s) => Ok(Scalar::to_f64(&parse_rational(s)?)),
            _ => Err(Error::Parse(format!("expected a number, got {v}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarKind {
    Rational,
    Float,
}

/// The `"scalar"` field when present; otherwise float iff some value is a
/// non-integer JSON number.
pub fn scalar_kind<'a>(obj: &Value, values: impl IntoIterator<Item = &'a Value>) -> Result<ScalarKind> {
    match obj.get("scalar") {
        Some(Value::String(s)) if s == "rational" => Ok(ScalarKind::Rational),
        Some(Value::String(s)) if s == "float" => Ok(ScalarKind::Float),
        Some(other) => Err(Error::Parse(format!("unknown scalar kind {other}"))),
        None => {
            let float = values
                .into_iter()
                .any(|v| matches!(v, Value::Number(num) if !(num.is_i64() || num.is_u64())));
            Ok(if float { ScalarKind::Float } else { ScalarKind::Rational })
        }
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

fn usize_field(v: &Value, key: &str) -> Result<usize> {
    field(v, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::Parse(format!("field {key:?} must be a nonnegative integer")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Parse(format!("{what} must be an array")))
}

pub fn parse(text: &str) -> Result<Value> {
    Ok(serde_json::from_str(text)?)
}

// ---- matrices

pub fn sym_matrix_to_json<T: JsonScalar>(m: &SymMatrix<T>) -> Value {
    let rows: Vec<Value> = m
        .rows()
        .iter()
        .map(|r| Value::Array(r.iter().map(JsonScalar::to_json).collect()))
        .collect();
    json!({"n": m.n(), "scalar": T::KIND, "entries": rows})
}

pub fn matrix_to_json(m: &AnyMatrix) -> Value {
    match m {
        AnyMatrix::Rational(m) => sym_matrix_to_json(m),
        AnyMatrix::Float(m) => sym_matrix_to_json(m),
    }
}

fn rows_of<T: JsonScalar>(rows: &[Value]) -> Result<Vec<Vec<T>>> {
    rows.iter()
        .map(|r| array(r, "matrix row")?.iter().map(T::from_json).collect())
        .collect()
}

/// `{"n", "scalar", "entries"}`; symmetry is checked by the matrix constructor.
pub fn matrix_from_json(v: &Value) -> Result<AnyMatrix> {
    let n = usize_field(v, "n")?;
    let rows = array(field(v, "entries")?, "entries")?;
    if rows.len() != n {
        return Err(Error::Structural(format!("n = {n} but {} rows given", rows.len())));
    }
    let all = rows.iter().filter_map(Value::as_array).flatten();
    Ok(match scalar_kind(v, all)? {
        ScalarKind::Rational => AnyMatrix::Rational(SymMatrix::from_rows(rows_of(rows)?)?),
        ScalarKind::Float => AnyMatrix::Float(SymMatrix::from_rows(rows_of(rows)?)?),
    })
}

// ---- facets and orbits

pub fn facets_to_json(n: usize, facets: &[FacetNormal]) -> Value {
    let list: Vec<&Vec<i64>> = facets.iter().map(|f| &f.coords).collect();
    json!({"n": n, "pairs": pair_labels(n), "facets": list})
}

pub fn facets_from_json(v: &Value) -> Result<(usize, Vec<FacetNormal>)> {
    let n = usize_field(v, "n")?;
    let facets = array(field(v, "facets")?, "facets")?
        .iter()
        .map(|f| {
            let coords: Vec<i64> = serde_json::from_value(f.clone())?;
            FacetNormal::new(n, coords)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((n, facets))
}

pub fn orbits_to_json(report: &OrbitReport) -> Value {
    let orbits: Vec<Value> = report
        .orbits
        .iter()
        .map(|o| json!({"representative": o.representative.coords, "size": o.size}))
        .collect();
    json!({"orbits": orbits, "total": report.total, "sizes": report.sizes()})
}

// ---- pair maps

fn pair_map<T: JsonScalar>(n: usize, values: &[T]) -> Value {
    let map: Map<String, Value> = pair_labels(n)
        .into_iter()
        .zip(values)
        .map(|(k, v)| (k, v.to_json()))
        .collect();
    Value::Object(map)
}

fn parse_pair(n: usize, key: &str) -> Result<usize> {
    let bad = || Error::Parse(format!("invalid pair key {key:?}, expected \"i,j\""));
    let (i, j) = key.split_once(',').ok_or_else(bad)?;
    let i: usize = i.trim().parse().map_err(|_| bad())?;
    let j: usize = j.trim().parse().map_err(|_| bad())?;
    if i == 0 || j == 0 || i > n || j > n || i == j {
        return Err(Error::Structural(format!("pair {key:?} is not a pair of distinct indices in [1, {n}]")));
    }
    Ok(pair_index(n, i - 1, j - 1))
}

/// Missing pairs are zero; a pair given twice (as `"i,j"` and `"j,i"`) is an error.
fn pair_values<T: JsonScalar>(n: usize, map: &Value) -> Result<Vec<T>> {
    let map = map
        .as_object()
        .ok_or_else(|| Error::Parse("pair map must be an object".into()))?;
    let mut out: Vec<Option<T>> = vec![None; pair_count(n)];
    for (k, v) in map {
        let idx = parse_pair(n, k)?;
        if out[idx].is_some() {
            return Err(Error::Structural(format!("pair {k:?} given twice")));
        }
        out[idx] = Some(T::from_json(v)?);
    }
    Ok(out.into_iter().map(|v| v.unwrap_or_else(T::zero)).collect())
}

// ---- ratios

pub fn ratio_to_json(r: &FullRatio) -> Value {
    let diag: Vec<Value> = r.diag().iter().map(JsonScalar::to_json).collect();
    json!({"n": r.n(), "offdiag": pair_map(r.n(), r.offdiag()), "diag": diag})
}

pub fn reduced_ratio_to_json(r: &ReducedRatio) -> Value {
    json!({"n": r.n, "offdiag": pair_map(r.n, &r.coords)})
}

/// The diagonal is reconstructed when absent and validated when present.
pub fn ratio_from_json(v: &Value) -> Result<FullRatio> {
    let n = usize_field(v, "n")?;
    let offdiag: Vec<Rational> = pair_values(n, field(v, "offdiag")?)?;
    match v.get("diag") {
        None | Some(Value::Null) => Ok(complete_diagonal(&ReducedRatio::new(n, offdiag)?)),
        Some(d) => {
            let diag = array(d, "diag")?
                .iter()
                .map(Rational::from_json)
                .collect::<Result<Vec<_>>>()?;
            FullRatio::new(n, offdiag, diag)
        }
    }
}

// ---- metrics and trees

pub fn metric_to_json<T: JsonScalar>(d: &LogMetric<T>) -> Value {
    json!({"n": d.n(), "scalar": T::KIND, "offdiag": pair_map(d.n(), d.values())})
}

pub fn metric_kind(v: &Value) -> Result<ScalarKind> {
    let values = v.get("offdiag").and_then(Value::as_object).into_iter().flat_map(|m| m.values());
    scalar_kind(v, values)
}

pub fn metric_from_json<T: JsonScalar>(v: &Value) -> Result<LogMetric<T>> {
    let n = usize_field(v, "n")?;
    LogMetric::new(n, pair_values(n, field(v, "offdiag")?)?)
}

pub fn tree_to_json<T: JsonScalar>(t: &PhyloTree<T>) -> Value {
    let edges: Vec<Value> = t
        .edges()
        .iter()
        .map(|e| json!({"u": e.u, "v": e.v, "len": e.len.to_json()}))
        .collect();
    json!({"leaves": t.leaves(), "edges": edges})
}

pub fn tree_kind(v: &Value) -> Result<ScalarKind> {
    let values = v
        .get("edges")
        .and_then(Value::as_array)
        .into_iter()
        .flatten()
        .filter_map(|e| e.get("len"));
    scalar_kind(v, values)
}

pub fn tree_from_json<T: JsonScalar>(v: &Value) -> Result<PhyloTree<T>> {
    let leaves: Vec<usize> = serde_json::from_value(field(v, "leaves")?.clone())?;
    let edges = array(field(v, "edges")?, "edges")?
        .iter()
        .map(|e| {
            Ok(TreeEdge {
                u: usize_field(e, "u")?,
                v: usize_field(e, "v")?,
                len: T::from_json(field(e, "len")?)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    PhyloTree::new(leaves, edges)
}

pub fn cut_decomposition_to_json<T: JsonScalar>(c: &CutDecomposition<T>) -> Value {
    let terms: Vec<Value> = c
        .terms
        .iter()
        .map(|t| json!({"subset": t.subset, "weight": t.weight.to_json()}))
        .collect();
    json!({"n": c.n, "terms": terms})
}

pub fn tree_approx_to_json<T: JsonScalar>(r: &TreeApproxReport<T>) -> Value {
    json!({
        "approx": metric_to_json(&r.approx),
        "basepoint": r.basepoint + 1,
        "repaired": r.repaired,
        "delta": r.delta.to_json(),
        "max_gap": r.max_gap.to_json(),
        "bound": r.bound.to_json(),
        "within_bound": r.within_bound,
        "is_tree": r.is_tree,
        "below_input": r.below_input,
    })
}

// ---- reports

pub fn subfree_to_json(r: &SubfreeReport) -> Value {
    json!({
        "holds": r.holds,
        "term_count": r.term_count,
        "diag_sum": r.diag_sum,
        "rearranged": r.rearranged,
        "negative_terms": r.serial_negative_terms(),
        "difference": r.difference.to_serial(),
    })
}

pub fn sup_to_json(e: &SupEstimate) -> Value {
    json!({
        "empirical_sup": e.empirical_sup,
        "exact": e.exact.as_ref().map(JsonScalar::to_json),
        "argmax": sym_matrix_to_json(&e.argmax),
        "source": e.source,
        "evaluated": e.evaluated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::triangular;
    use crate::scalar::{int, rat};

    #[test]
    fn matrix_round_trip() {
        let m = SymMatrix::from_rows(vec![vec![int(1), rat(1, 2)], vec![rat(1, 2), int(0)]]).unwrap();
        let v = sym_matrix_to_json(&m);
        assert_eq!(v["entries"][0][1], json!("1/2"));
        assert_eq!(v["entries"][0][0], json!("1/1"));
        assert_eq!(matrix_from_json(&v).unwrap(), AnyMatrix::Rational(m));

        let f = json!({"n": 2, "scalar": "float", "entries": [[1.0, 0.5], [0.5, 2]]});
        assert!(matches!(matrix_from_json(&f).unwrap(), AnyMatrix::Float(_)));
        let asym = json!({"n": 2, "entries": [["1", "2"], ["3", "1"]]});
        assert!(matrix_from_json(&asym).is_err());
    }

    #[test]
    fn ratio_round_trip_and_completion() {
        let r = triangular(1, 2, 3, 3).unwrap();
        let v = ratio_to_json(&r);
        assert_eq!(v["offdiag"]["1,2"], json!("1/1"));
        assert_eq!(ratio_from_json(&v).unwrap(), r);
        let reduced = json!({"n": 3, "offdiag": {"1,2": "1", "1,3": "-1", "3,2": "-1"}});
        assert_eq!(ratio_from_json(&reduced).unwrap(), r);
        let dup = json!({"n": 3, "offdiag": {"1,2": "1", "2,1": "1"}});
        assert!(ratio_from_json(&dup).is_err());
    }

    #[test]
    fn metric_and_tree_round_trip() {
        let d = LogMetric::new(3, vec![int(2), int(2), int(2)]).unwrap();
        let v = metric_to_json(&d);
        assert_eq!(metric_kind(&v).unwrap(), ScalarKind::Rational);
        assert_eq!(metric_from_json::<Rational>(&v).unwrap(), d);
        let t = crate::metric::tree_reconstruct(&d).unwrap();
        let tv = tree_to_json(&t);
        assert_eq!(tree_from_json::<Rational>(&tv).unwrap(), t);
        let fv = json!({"n": 2, "offdiag": {"1,2": 0.25}});
        assert_eq!(metric_kind(&fv).unwrap(), ScalarKind::Float);
    }

    #[test]
    fn facets_round_trip() {
        let f = vec![FacetNormal::new(3, vec![1, -1, -1]).unwrap()];
        let v = facets_to_json(3, &f);
        assert_eq!(v["pairs"], json!(["1,2", "1,3", "2,3"]));
        assert_eq!(facets_from_json(&v).unwrap(), (3, f));
    }
}
