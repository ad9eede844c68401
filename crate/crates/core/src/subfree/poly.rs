use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Exponents are packed 8 bits per variable into a `u128`.
const BITS: u32 = 8;
const MAX_EXP: u32 = (1 << BITS) - 1;
/// Largest `n` whose `2n` variables fit the packing.
pub const MAX_POLY_N: usize = 8;

/// A sparse polynomial with integer coefficients in `a_1..a_n, b_1..b_n`.
///
/// Variable `k < n` is `a_{k+1}`, variable `n + k` is `b_{k+1}`. No zero
/// coefficient is ever stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    n: usize,
    terms: HashMap<u128, BigInt>,
}

fn exp_of(m: u128, var: usize) -> u32 {
    ((m >> (BITS as usize * var)) & MAX_EXP as u128) as u32
}

fn degree_of(m: u128, vars: usize) -> u32 {
    (0..vars).map(|v| exp_of(m, v)).sum()
}

impl IntPoly {
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_POLY_N {
            return Err(Error::Capability(format!(
                "polynomials support 1 <= n <= {MAX_POLY_N}, got {n}"
            )));
        }
        Ok(Self {
            n,
            terms: HashMap::new(),
        })
    }

    pub fn constant(n: usize, c: BigInt) -> Result<Self> {
        let mut p = Self::zero(n)?;
        if !c.is_zero() {
            p.terms.insert(0, c);
        }
        Ok(p)
    }

    pub fn one(n: usize) -> Result<Self> {
        Self::constant(n, BigInt::one())
    }

    /// Builds from explicit `(exponents, coefficient)` pairs, combining repeats.
    pub fn from_terms(n: usize, terms: &[(Vec<u32>, BigInt)]) -> Result<Self> {
        let mut p = Self::zero(n)?;
        for (exps, c) in terms {
            if exps.len() != 2 * n {
                return Err(Error::Structural(format!(
                    "monomial has {} exponents, expected {}",
                    exps.len(),
                    2 * n
                )));
            }
            if let Some(e) = exps.iter().find(|&&e| e > MAX_EXP) {
                return Err(Error::Capability(format!("exponent {e} exceeds {MAX_EXP}")));
            }
            let m = exps
                .iter()
                .enumerate()
                .fold(0u128, |m, (v, &e)| m | (e as u128) << (BITS as usize * v));
            p.add_term(m, c.clone());
        }
        Ok(p)
    }

    fn add_term(&mut self, m: u128, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> usize {
        2 * self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|&m| degree_of(m, self.vars())).max().unwrap_or(0)
    }

    fn same_universe(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Structural(format!(
                "polynomials in {} and {} variables",
                self.vars(),
                other.vars()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_universe(other)?;
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.add_term(m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_universe(other)?;
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.add_term(m, -c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self {
                n: self.n,
                terms: HashMap::new(),
            };
        }
        Self {
            n: self.n,
            terms: self.terms.iter().map(|(&m, c)| (m, c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_universe(other)?;
        // per-variable exponents cannot overflow when total degrees fit
        if self.total_degree() + other.total_degree() > MAX_EXP {
            return Err(Error::Capability(format!("product degree exceeds {MAX_EXP}")));
        }
        let mut out = Self {
            n: self.n,
            terms: HashMap::with_capacity(self.terms.len() * other.terms.len()),
        };
        for (&m1, c1) in &self.terms {
            for (&m2, c2) in &other.terms {
                out.add_term(m1 + m2, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(self.n)?;
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Terms in graded order: higher total degree first, then exponent
    /// vectors in decreasing lexicographic order (`a_1 > ... > a_n > b_1 > ... > b_n`).
    pub fn terms(&self) -> Vec<(Vec<u32>, BigInt)> {
        let vars = self.vars();
        let mut out: Vec<(Vec<u32>, BigInt)> = self
            .terms
            .iter()
            .map(|(&m, c)| ((0..vars).map(|v| exp_of(m, v)).collect(), c.clone()))
            .collect();
        out.sort_by(|(x, _), (y, _)| {
            let (dx, dy): (u32, u32) = (x.iter().sum(), y.iter().sum());
            dy.cmp(&dx).then_with(|| y.cmp(x))
        });
        out
    }

    /// Terms with a negative coefficient, in the same order as [`Self::terms`].
    pub fn negative_terms(&self) -> Vec<(Vec<u32>, BigInt)> {
        self.terms().into_iter().filter(|(_, c)| c.is_negative()).collect()
    }

    pub fn eval(&self, a: &[Rational], b: &[Rational]) -> Result<Rational> {
        if a.len() != self.n || b.len() != self.n {
            return Err(Error::Structural(format!("expected {} values for a and for b", self.n)));
        }
        let vals: Vec<&Rational> = a.iter().chain(b).collect();
        let mut total = Rational::zero();
        for (&m, c) in &self.terms {
            let mut t = Rational::from_integer(c.clone());
            for (v, x) in vals.iter().enumerate() {
                let e = exp_of(m, v);
                if e > 0 {
                    t *= num_traits::pow::pow((*x).clone(), e as usize);
                }
            }
            total += t;
        }
        Ok(total)
    }

    pub fn to_serial(&self) -> SerialPoly {
        SerialPoly {
            terms: self
                .terms()
                .into_iter()
                .map(|(exps, c)| SerialTerm {
                    exps,
                    coef: c.to_string(),
                })
                .collect(),
        }
    }
}

/// `{"terms": [{"exps": [...], "coef": "..."}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct SerialPoly {
    pub terms: Vec<SerialTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct SerialTerm {
    pub exps: Vec<u32>,
    pub coef: String,
}

impl SerialPoly {
    pub fn to_poly(&self, n: usize) -> Result<IntPoly> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                t.coef
                    .parse::<BigInt>()
                    .map(|c| (t.exps.clone(), c))
                    .map_err(|e| Error::Parse(format!("coefficient {:?}: {e}", t.coef)))
            })
            .collect::<Result<Vec<_>>>()?;
        IntPoly::from_terms(n, &terms)
    }
}

/// Renders e.g. `2*a1^2*b2*b3 + 2*a2*a3*b1^2`.
pub fn format_monomial(n: usize, exps: &[u32]) -> String {
    let mut parts = Vec::new();
    for (v, &e) in exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let name = if v < n {
            format!("a{}", v + 1)
        } else {
            format!("b{}", v - n + 1)
        };
        parts.push(if e == 1 { name } else { format!("{name}^{e}") });
    }
    parts.join("*")
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (exps, c)) in terms.iter().enumerate() {
            let mono = format_monomial(self.n, exps);
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{mag}*{mono}")?,
            }
        }
        Ok(())
    }
}

/// `p_ij = a_i b_j + a_j b_i` for 1-based `i, j`; `2 a_i b_i` on the diagonal.
pub fn poly_from_entry(i: usize, j: usize, n: usize) -> Result<IntPoly> {
    if i == 0 || j == 0 || i > n || j > n {
        return Err(Error::Domain(format!("entry ({i}, {j}) outside [1, {n}]")));
    }
    let mut p = IntPoly::zero(n)?;
    let bit = |v: usize| 1u128 << (BITS as usize * v);
    let (i, j) = (i - 1, j - 1);
    p.add_term(bit(i) + bit(n + j), BigInt::one());
    p.add_term(bit(j) + bit(n + i), BigInt::one());
    Ok(p)
}
