use crate::error::{Error, Result};

fn check(a: f64, b: f64, c: f64, p: f64) -> Result<()> {
    if [a, b, c].iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::Domain("a, b, c must be nonnegative".into()));
    }
    if !p.is_finite() || p < 0.0 {
        return Err(Error::Domain(format!("p must be nonnegative, got {p}")));
    }
    Ok(())
}

/// Optimal constant of `a alpha^{23|1} + b alpha^{13|2} + c alpha^{12|3}` on
/// 3x3 matrices of the class `T_p`: piecewise `2^{ap}`, `2^{bp}`, `2^{cp}`,
/// or `2^{p(a+b+c)/2}`.
pub fn fp_delta3(a: f64, b: f64, c: f64, p: f64) -> Result<f64> {
    check(a, b, c, p)?;
    let exp = if a > b + c {
        a * p
    } else if b > a + c {
        b * p
    } else if c > a + b {
        c * p
    } else {
        p * (a + b + c) / 2.0
    };
    Ok(exp.exp2())
}

/// The same constant as a linear program in `q_ij = log2 p_ij`, solved by
/// enumerating every vertex of the feasible region (all triples of tight
/// constraints) and maximising the objective over the feasible ones.
pub fn fp_delta3_lp(a: f64, b: f64, c: f64, p: f64) -> Result<f64> {
    check(a, b, c, p)?;
    // variables (q12, q13, q23); constraints g . q <= p
    let cons: [[f64; 3]; 6] = [
        [-1.0, -1.0, 1.0],
        [-1.0, 1.0, -1.0],
        [1.0, -1.0, -1.0],
        [-2.0, 0.0, 0.0],
        [0.0, -2.0, 0.0],
        [0.0, 0.0, -2.0],
    ];
    let obj = [c - a - b, b - a - c, a - b - c];
    let tol = 1e-9 * (1.0 + p);
    let mut best: Option<f64> = None;
    for i in 0..6 {
        for j in (i + 1)..6 {
            for k in (j + 1)..6 {
                let Some(q) = solve3([cons[i], cons[j], cons[k]], [p, p, p]) else {
                    continue;
                };
                if cons.iter().all(|g| dot(g, &q) <= p + tol) {
                    let v = dot(&obj, &q);
                    best = Some(best.map_or(v, |b| b.max(v)));
                }
            }
        }
    }
    let best = best.ok_or_else(|| Error::InvariantViolation("feasible region has no vertex".into()))?;
    Ok(best.exp2())
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Cramer's rule; `None` when the system is singular.
fn solve3(m: [[f64; 3]; 3], rhs: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&m);
    if d.abs() < 1e-12 {
        return None;
    }
    let mut out = [0.0; 3];
    for (col, slot) in out.iter_mut().enumerate() {
        let mut mc = m;
        for row in 0..3 {
            mc[row][col] = rhs[row];
        }
        *slot = det(&mc) / d;
    }
    Some(out)
}
