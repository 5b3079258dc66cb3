//! Independent numeric verifiers for the closed forms: line-hyperbola
//! intersection for the channel kinematics, bisection root scans for
//! tangency velocities and gap edges, and a direct static-step matching
//! solve. Nothing here reuses the closed-form channel formulas it checks.

#[allow(unused_imports)] // `Float` supplies the math methods in no_std builds
use num_traits::Float;

use crate::error::Error;
use crate::kinematics::Region;
use crate::Result;

/// A transition line through the incident point intersected with a region's
/// dispersion hyperbola.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineHyperbolaProblem {
    pub anchor_momentum: f64,
    pub anchor_energy: f64,
    /// Line slope; the front velocity in the dispersion diagram.
    pub slope: f64,
    /// Region whose hyperbola (center `(qA, qV)`, unit semi-axes) is cut.
    pub region: Region,
}

/// Up to two real intersection points `(p, E)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IntersectionRoots {
    points: [(f64, f64); 2],
    len: usize,
}

impl IntersectionRoots {
    fn push(&mut self, p: f64, e: f64) {
        self.points[self.len] = (p, e);
        self.len += 1;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_slice(&self) -> &[(f64, f64)] {
        &self.points[..self.len]
    }
}

/// Intersects the line `E = E_anchor + slope (p - p_anchor)` with the
/// dispersion hyperbola `(E - qV)^2 - (p - qA)^2 = 1`.
///
/// The quadratic `A p^2 + B p + C = 0` is solved with the
/// `q = -(B + sign(B) sqrt(D))/2` pairing so neither root suffers
/// cancellation; a discriminant below `1e-12 B^2` counts as tangency and
/// returns a single root.
pub fn intersect_line_hyperbola(problem: &LineHyperbolaProblem) -> IntersectionRoots {
    let n = problem.slope;
    let h = problem.region.qa;
    let k = problem.region.qv;
    // y-intercept of the transition line.
    let c = problem.anchor_energy - n * problem.anchor_momentum;
    let ck = c - k;

    let a = n * n - 1.0;
    let b = 2.0 * (n * ck + h);
    let cc = ck * ck - h * h - 1.0;

    let mut roots = IntersectionRoots::default();
    let line_energy = |p: f64| problem.anchor_energy + n * (p - problem.anchor_momentum);

    if a == 0.0 {
        // Lightlike slope: the quadratic degenerates to a linear equation.
        if b != 0.0 {
            let p = -cc / b;
            roots.push(p, line_energy(p));
        }
        return roots;
    }

    let disc = b * b - 4.0 * a * cc;
    let tangency_tol = 1e-12 * b * b;
    if disc < -tangency_tol {
        return roots;
    }
    if disc <= tangency_tol {
        let p = -b / (2.0 * a);
        roots.push(p, line_energy(p));
        return roots;
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let (p1, p2) = if q == 0.0 {
        (0.0, 0.0)
    } else {
        (q / a, cc / q)
    };
    let (lo, hi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
    roots.push(lo, line_energy(lo));
    if hi != lo {
        roots.push(hi, line_energy(hi));
    }
    roots
}

/// All roots of `f` inside `[lo, hi]` found by a 1024-point uniform
/// pre-scan followed by bisection to absolute tolerance 1e-12.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScanRoots {
    vals: [f64; 4],
    len: usize,
}

impl ScanRoots {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.vals[..self.len]
    }
}

pub fn radicand_root_scan(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<ScanRoots> {
    const SAMPLES: usize = 1024;
    let mut roots = ScanRoots::default();
    let step = (hi - lo) / SAMPLES as f64;
    let mut x_prev = lo;
    let mut f_prev = f(lo);
    for i in 1..=SAMPLES {
        let x = if i == SAMPLES { hi } else { lo + step * i as f64 };
        let fx = f(x);
        if f_prev == 0.0 {
            if roots.len < roots.vals.len() {
                roots.vals[roots.len] = x_prev;
                roots.len += 1;
            }
        } else if f_prev * fx < 0.0 && roots.len < roots.vals.len() {
            roots.vals[roots.len] = bisect(&f, x_prev, x);
            roots.len += 1;
        }
        x_prev = x;
        f_prev = fx;
    }
    if roots.is_empty() {
        return Err(Error::NoRoot);
    }
    Ok(roots)
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() < 1e-12 {
            return mid;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_lo < 0.0) == (f_mid < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Direct static-step matching: continuity of `(1, G_i) + r (1, G_r)` and
/// `t (1, G_t)` at a purely spatial interface, probabilities from the
/// longitudinal current `j^z = 2 Re G |amp|^2`.
///
/// Nothing from the moving-front kinematics enters: the transmitted
/// momentum comes straight from the static dispersion, with the
/// negative-continuum root aimed so the transmitted wave moves forward.
pub fn static_matching_solve(
    incident_energy: f64,
    region1: &Region,
    region2: &Region,
) -> Result<(f64, f64, f64, f64)> {
    let ke1 = region1.kinetic_energy(incident_energy);
    if ke1 <= 1.0 {
        return Err(Error::Domain("incident energy below branch minimum"));
    }
    let kp1 = (ke1 * ke1 - 1.0).sqrt();

    let ke2 = region2.kinetic_energy(incident_energy);
    let disc = (ke2 - 1.0) * (ke2 + 1.0);
    if disc < 0.0 {
        return Err(Error::EvanescentStatic);
    }
    // Forward group velocity: positive root on the positive continuum,
    // negative root on the negative continuum.
    let kp2 = if ke2 >= 0.0 { disc.sqrt() } else { -disc.sqrt() };

    let g_i = (ke1 - 1.0) / kp1;
    let g_r = (ke1 - 1.0) / (-kp1);
    let g_t = if kp2 != 0.0 { (ke2 - 1.0) / kp2 } else { 0.0 };

    let denom = g_t - g_r;
    if denom == 0.0 {
        return Err(Error::DegenerateChannels);
    }
    let r = (g_i - g_t) / denom;
    let t = (g_i - g_r) / denom;

    let j_i = 2.0 * g_i;
    let j_r = r * r * 2.0 * g_r;
    let j_t = t * t * 2.0 * g_t;
    Ok((r, t, -j_r / j_i, j_t / j_i))
}
