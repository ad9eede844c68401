use rayon::prelude::*;

use super::BarycentricRatio;

/// `x^y` with `0^0 = 1`; bases within rounding of zero count as zero.
fn pow0(base: f64, exp: f64) -> f64 {
    if base <= 0.0 {
        if exp == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        base.powf(exp)
    }
}

/// Coordinates sorted so the largest comes first; the closed form is
/// symmetric in the two smaller ones.
fn sorted_desc(q: &BarycentricRatio) -> [f64; 3] {
    let mut v = q.coords();
    v.sort_by(|x, y| y.total_cmp(x));
    v
}

fn entropy_formula(a: f64, b: f64, c: f64) -> f64 {
    2.0 * pow0(a, a)
        * pow0(b, b)
        * pow0(c, c)
        * pow0((2.0 * a - 1.0).max(0.0), 2.0 * a - 1.0)
        * pow0((1.0 - 2.0 * b).max(0.0), 2.0 * b - 1.0)
        * pow0((1.0 - 2.0 * c).max(0.0), 2.0 * c - 1.0)
}

/// On-circle tolerance for the discriminant.
const CIRCLE_TOL: f64 = 1e-12;

/// The optimal bounding constant on 3x3 Lorentzian matrices.
///
/// Equal to 1 on and inside the inscribed circle; outside, the entropy
/// formula with the largest coordinate in the role of `a`.
pub fn theorem_c(q: &BarycentricRatio) -> f64 {
    let disc = q.discriminant();
    let [a, b, c] = sorted_desc(q);
    if disc.abs() <= CIRCLE_TOL {
        // both branches apply on the circle and must agree
        let outer = entropy_formula(a, b, c);
        assert!(
            (outer - 1.0).abs() <= 1e-6,
            "entropy formula gives {outer} on the inscribed circle at {q:?}"
        );
        return 1.0;
    }
    if disc < 0.0 {
        1.0
    } else {
        entropy_formula(a, b, c)
    }
}

/// Grid resolution and refinement budget for [`verify_n3`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct N3Grid {
    pub points: usize,
    pub newton_steps: usize,
}

impl Default for N3Grid {
    fn default() -> Self {
        Self {
            points: 2001,
            newton_steps: 50,
        }
    }
}

/// `log r(x, y)` for `r = x^b y^c (1 + sqrt((1-x)(1-y)))^{a-b-c}`.
struct Objective {
    a: f64,
    b: f64,
    c: f64,
}

impl Objective {
    fn log_r(&self, x: f64, y: f64) -> f64 {
        let term = |w: f64, v: f64| {
            if w == 0.0 {
                0.0
            } else if v <= 0.0 {
                f64::NEG_INFINITY
            } else {
                w * v.ln()
            }
        };
        let s = ((1.0 - x) * (1.0 - y)).max(0.0).sqrt();
        term(self.b, x) + term(self.c, y) + (self.a - self.b - self.c) * (1.0 + s).ln()
    }

    fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        let h = 1e-7;
        let fx = (self.log_r(x + h, y) - self.log_r(x - h, y)) / (2.0 * h);
        let fy = (self.log_r(x, y + h) - self.log_r(x, y - h)) / (2.0 * h);
        [fx, fy]
    }

    fn hessian(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        let h = 1e-5;
        let gxp = self.gradient(x + h, y);
        let gxm = self.gradient(x - h, y);
        let gyp = self.gradient(x, y + h);
        let gym = self.gradient(x, y - h);
        let hxx = (gxp[0] - gxm[0]) / (2.0 * h);
        let hyy = (gyp[1] - gym[1]) / (2.0 * h);
        let hxy = 0.5 * ((gxp[1] - gxm[1]) + (gyp[0] - gym[0])) / (2.0 * h);
        [[hxx, hxy], [hxy, hyy]]
    }

    /// Damped Newton ascent from `(x, y)`, kept strictly inside the square.
    fn refine(&self, mut x: f64, mut y: f64, steps: usize) -> (f64, f64, f64) {
        let mut best = self.log_r(x, y);
        let margin = 1e-6;
        if x <= margin || y <= margin || x >= 1.0 - margin || y >= 1.0 - margin {
            return (x, y, best);
        }
        for _ in 0..steps {
            let g = self.gradient(x, y);
            let [[hxx, hxy], [_, hyy]] = self.hessian(x, y);
            let det = hxx * hyy - hxy * hxy;
            let (dx, dy) = if hxx < 0.0 && det > 0.0 {
                ((-hyy * g[0] + hxy * g[1]) / det, (hxy * g[0] - hxx * g[1]) / det)
            } else {
                (1e-3 * g[0], 1e-3 * g[1])
            };
            let mut t = 1.0;
            let mut moved = false;
            for _ in 0..30 {
                let nx = (x + t * dx).clamp(margin, 1.0 - margin);
                let ny = (y + t * dy).clamp(margin, 1.0 - margin);
                let v = self.log_r(nx, ny);
                if v > best {
                    (x, y, best) = (nx, ny, v);
                    moved = true;
                    break;
                }
                t *= 0.5;
            }
            if !moved {
                break;
            }
        }
        (x, y, best)
    }
}

/// Numerical maximum of the reduced two-variable problem, independent of
/// the closed form: a grid scan on `[0, 1]^2`, Newton refinement, and the
/// stationary point `(4ab/(a+b-c)^2, 4ac/(a-b+c)^2)` when it lies in the square.
pub fn verify_n3(q: &BarycentricRatio, grid: N3Grid) -> f64 {
    if q.discriminant() <= 0.0 {
        return 1.0;
    }
    let [a, b, c] = sorted_desc(q);
    let obj = Objective { a, b, c };
    let m = grid.points.max(2);
    let step = 1.0 / (m - 1) as f64;
    let (bi, bj, mut best) = (0..m)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 * step;
            (0..m)
                .map(|j| (i, j, obj.log_r(x, j as f64 * step)))
                .fold((0, 0, f64::NEG_INFINITY), |acc, v| if v.2 > acc.2 { v } else { acc })
        })
        .reduce(
            || (0, 0, f64::NEG_INFINITY),
            |p, q| if q.2 > p.2 || (q.2 == p.2 && (q.0, q.1) < (p.0, p.1)) { q } else { p },
        );
    let (_, _, refined) = obj.refine(bi as f64 * step, bj as f64 * step, grid.newton_steps);
    best = best.max(refined);
    let (dx, dy) = (a + b - c, a - b + c);
    if dx > 0.0 && dy > 0.0 {
        let (x0, y0) = (4.0 * a * b / (dx * dx), 4.0 * a * c / (dy * dy));
        if (0.0..=1.0).contains(&x0) && (0.0..=1.0).contains(&y0) {
            best = best.max(obj.log_r(x0, y0));
        }
    }
    best.exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: f64, b: f64, c: f64) -> BarycentricRatio {
        BarycentricRatio::new(a, b, c).unwrap()
    }

    #[test]
    fn special_points() {
        assert_eq!(theorem_c(&q(1.0, 0.0, 0.0)), 2.0);
        assert_eq!(theorem_c(&q(0.0, 0.0, 1.0)), 2.0);
        assert_eq!(theorem_c(&q(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)), 1.0);
        assert_eq!(theorem_c(&q(0.5, 0.5, 0.0)), 1.0);
        assert_eq!(theorem_c(&q(0.0, 0.5, 0.5)), 1.0);
    }

    #[test]
    fn formula_matches_optimiser() {
        let g = N3Grid::default();
        for (a, b, c) in [(1.0, 0.0, 0.0), (0.8, 0.1, 0.1), (0.7, 0.3, 0.0), (0.1, 0.05, 0.85), (0.6, 0.25, 0.15)] {
            let p = q(a, b, c);
            let (tc, v) = (theorem_c(&p), verify_n3(&p, g));
            assert!((tc - v).abs() <= 1e-6, "({a},{b},{c}): {tc} vs {v}");
        }
    }

    #[test]
    fn symmetric_and_at_least_one() {
        let p = theorem_c(&q(0.7, 0.2, 0.1));
        assert!(p > 1.0);
        for (a, b, c) in [(0.2, 0.7, 0.1), (0.1, 0.2, 0.7), (0.7, 0.1, 0.2)] {
            assert!((theorem_c(&q(a, b, c)) - p).abs() < 1e-15);
        }
    }
}
