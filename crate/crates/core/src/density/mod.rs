//! The limiting density ψ of complex algebraic numbers and its integrals.
//!
//! For `z` off the real axis, `ψ(z)` integrates `|P'(z)|²/|Im z|` over the
//! coefficient vectors `t = (a_2, …, a_n) ∈ [−1,1]^(n−1)` whose forced
//! lower coefficients `a_1`, `a_0` (fixed by `P(z) = 0`) also lie in
//! `[−1,1]`. Integration over `t` uses randomized QMC with indicator
//! rejection; closed forms are used where the constraint set is simple.

mod closed;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::zeta;
use crate::error::{domain, Result};
use crate::qmc::{replicate_summary, Sobol};
use crate::regions::{ComplexRegion, Primitive};

pub use closed::{psi_closed_large, psi_closed_small, psi_n2, LARGE_ZONE, SMALL_ZONE};

pub const MAX_N: usize = crate::qmc::MAX_DIMENSION + 1;
const REPLICATES: usize = 16;
/// Stream offset separating the polar evaluator from the Cartesian one.
const POLAR_STREAMS: u64 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    ClosedSmall,
    ClosedLarge,
    ClosedN2,
    MonteCarlo,
    Polar,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::ClosedSmall => "closed-small",
            Method::ClosedLarge => "closed-large",
            Method::ClosedN2 => "closed-n2",
            Method::MonteCarlo => "mc",
            Method::Polar => "polar",
        }
    }

    pub fn is_closed(self) -> bool {
        matches!(self, Method::ClosedSmall | Method::ClosedLarge | Method::ClosedN2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub value: f64,
    /// Zero exactly for closed forms.
    pub std_error: f64,
    pub method: Method,
    /// Integrand evaluations used (0 for closed forms).
    pub samples: u64,
}

pub(crate) fn check_off_axis(z: Complex64, n: usize) -> Result<()> {
    if !(2..=MAX_N).contains(&n) {
        return domain(format!("degree n={n} must lie in 2..={MAX_N}"));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return domain("z must be finite");
    }
    if z.im == 0.0 {
        return domain(format!("the density is undefined on the real axis (z = {z})"));
    }
    Ok(())
}

/// Constraint set and integrand of ψ at one point.
#[derive(Clone, Debug)]
pub struct DzSpec {
    pub z: Complex64,
    pub n: usize,
    /// `|Σ t_k·a1[k]| ≤ 1`, the forced linear coefficient.
    a1: Vec<f64>,
    /// `|Σ t_k·a0[k]| ≤ 1`, the forced constant coefficient.
    a0: Vec<f64>,
    /// `P'(z) = Σ t_k·deriv[k]`.
    deriv: Vec<Complex64>,
}

impl DzSpec {
    pub fn new(z: Complex64, n: usize) -> Result<DzSpec> {
        check_off_axis(z, n)?;
        let mut a1 = Vec::with_capacity(n - 1);
        let mut a0 = Vec::with_capacity(n - 1);
        let mut zk1 = z * z;
        for _ in 1..n {
            let ratio = zk1.im / z.im;
            a1.push(ratio);
            a0.push(zk1.re - z.re * ratio);
            zk1 *= z;
        }
        Ok(DzSpec { z, n, a1, a0, deriv: closed::derivative_weights(z, n) })
    }

    pub fn contains(&self, t: &[f64]) -> bool {
        let dot = |w: &[f64]| w.iter().zip(t).map(|(a, b)| a * b).sum::<f64>();
        t.iter().all(|x| x.abs() <= 1.0) && dot(&self.a1).abs() <= 1.0 && dot(&self.a0).abs() <= 1.0
    }

    /// `|P'(z)|²` for coefficient vector `t`.
    pub fn integrand(&self, t: &[f64]) -> f64 {
        self.deriv
            .iter()
            .zip(t)
            .map(|(w, &x)| w * x)
            .sum::<Complex64>()
            .norm_sqr()
    }

    fn slab(&self) -> Slab {
        Slab {
            c0: self.a0.clone(),
            c1: self.a1.clone(),
            u: self.deriv.iter().map(|w| w.re).collect(),
            v: self.deriv.iter().map(|w| w.im).collect(),
        }
    }

    /// The constraints are implied by the box near the origin.
    pub fn is_full_box(&self) -> bool {
        self.z.norm() <= SMALL_ZONE
    }
}

/// Constraint set and integrand of the repulsion constant at `x₀`: the
/// limit of `DzSpec` as `z → x₀`.
#[derive(Clone, Debug)]
pub struct RepulsionSpec {
    pub x0: f64,
    pub n: usize,
    c_const: Vec<f64>,
    c_lin: Vec<f64>,
    weights: Vec<f64>,
}

impl RepulsionSpec {
    pub fn new(x0: f64, n: usize) -> Result<RepulsionSpec> {
        if !(2..=MAX_N).contains(&n) || !x0.is_finite() {
            return domain(format!("bad repulsion parameters x0={x0}, n={n}"));
        }
        let mut c_const = Vec::new();
        let mut c_lin = Vec::new();
        let mut weights = Vec::new();
        for k in 1..n {
            let kf = k as f64;
            c_const.push(kf * x0.powi(k as i32 + 1));
            c_lin.push((kf + 1.0) * x0.powi(k as i32));
            weights.push(kf * (kf + 1.0) * x0.powi(k as i32 - 1));
        }
        Ok(RepulsionSpec { x0, n, c_const, c_lin, weights })
    }

    pub fn contains(&self, t: &[f64]) -> bool {
        let dot = |w: &[f64]| w.iter().zip(t).map(|(a, b)| a * b).sum::<f64>();
        t.iter().all(|x| x.abs() <= 1.0) && dot(&self.c_const).abs() <= 1.0 && dot(&self.c_lin).abs() <= 1.0
    }

    fn slab(&self) -> Slab {
        Slab { c0: self.c_const.clone(), c1: self.c_lin.clone(), u: self.weights.clone(), v: vec![0.0; self.weights.len()] }
    }

    pub fn integrand(&self, t: &[f64]) -> f64 {
        self.weights.iter().zip(t).map(|(w, x)| w * x).sum::<f64>().powi(2)
    }
}

/// Polytope `{t ∈ [−1,1]^dim : |c0·t| ≤ 1, |c1·t| ≤ 1}` carrying the
/// integrand `(u·t)² + (v·t)²`.
#[derive(Clone, Debug)]
struct Slab {
    c0: Vec<f64>,
    c1: Vec<f64>,
    u: Vec<f64>,
    v: Vec<f64>,
}

impl Slab {
    /// Exact integral over `t_1` with the remaining coordinates fixed.
    fn first_axis(&self, rest: &[f64]) -> f64 {
        let tail = |w: &[f64]| w[1..].iter().zip(rest).map(|(a, b)| a * b).sum::<f64>();
        let (mut lo, mut hi) = (-1.0f64, 1.0f64);
        for c in [&self.c0, &self.c1] {
            let s = tail(c);
            if c[0] == 0.0 {
                if s.abs() > 1.0 {
                    return 0.0;
                }
                continue;
            }
            let (a, b) = ((-1.0 - s) / c[0], (1.0 - s) / c[0]);
            lo = lo.max(a.min(b));
            hi = hi.min(a.max(b));
        }
        if hi <= lo {
            return 0.0;
        }
        let (a, b) = (tail(&self.u), tail(&self.v));
        let (u0, v0) = (self.u[0], self.v[0]);
        let quad = u0 * u0 + v0 * v0;
        let lin = u0 * a + v0 * b;
        let constant = a * a + b * b;
        quad * (hi.powi(3) - lo.powi(3)) / 3.0 + lin * (hi * hi - lo * lo) + constant * (hi - lo)
    }

    /// One estimate per replicate of the integral over the polytope: the
    /// first coordinate exactly, the rest by shifted Sobol streams.
    fn replicates(&self, replicates: usize, per: usize, seed: u64, stream_base: u64) -> Result<Vec<f64>> {
        let dim = self.c0.len() - 1;
        if dim == 0 {
            return Ok(vec![self.first_axis(&[]); replicates]);
        }
        let sobol = Sobol::new(dim)?;
        let volume = 2f64.powi(dim as i32);
        Ok((0..replicates)
            .into_par_iter()
            .map(|r| {
                let mut stream = sobol.shifted_stream(seed, stream_base + r as u64);
                let mut p = vec![0.0; dim];
                let mut acc = 0.0;
                for _ in 0..per {
                    stream.next_into(&mut p);
                    for x in p.iter_mut() {
                        *x = 2.0 * *x - 1.0;
                    }
                    acc += self.first_axis(&p);
                }
                volume * acc / per as f64
            })
            .collect())
    }
}

fn split_samples(samples: u64) -> Result<(usize, usize)> {
    if samples < 2 {
        return domain("at least 2 samples are needed for an error estimate");
    }
    let reps = REPLICATES.min(samples as usize);
    Ok((reps, samples as usize / reps))
}

/// QMC estimate of ψ(z) in Cartesian form.
pub fn psi_mc(z: Complex64, n: usize, samples: u64, seed: u64) -> Result<DensityEstimate> {
    let spec = DzSpec::new(z, n)?;
    let (reps, per) = split_samples(samples)?;
    let values = spec.slab().replicates(reps, per, seed, 0)?;
    let (mean, se) = replicate_summary(&values);
    let scale = 1.0 / z.im.abs();
    Ok(DensityEstimate {
        value: mean * scale,
        std_error: se * scale,
        method: Method::MonteCarlo,
        samples: (reps * per) as u64,
    })
}

/// QMC estimate of ψ(z) from the polar form `z = r·e^{iα}`, on a stream
/// independent of [`psi_mc`].
pub fn psi_polar(z: Complex64, n: usize, samples: u64, seed: u64) -> Result<DensityEstimate> {
    check_off_axis(z, n)?;
    let (reps, per) = split_samples(samples)?;
    let r = z.norm();
    let alpha = z.arg();
    let (sin_a, cos_a) = alpha.sin_cos();
    let mut re_w = Vec::new();
    let mut im_w = Vec::new();
    let mut c0 = Vec::new();
    let mut c1 = Vec::new();
    for k in 1..n {
        let kf = k as f64;
        let rk1 = r.powi(k as i32 - 1);
        let s_k1 = ((kf + 1.0) * alpha).sin();
        let c_k1 = ((kf + 1.0) * alpha).cos();
        re_w.push(rk1 * ((kf + 1.0) * c_k1 - cos_a * s_k1 / sin_a));
        im_w.push(kf * rk1 * s_k1);
        c0.push(r.powi(k as i32 + 1) * (kf * alpha).sin() / sin_a);
        c1.push(r.powi(k as i32) * s_k1 / sin_a);
    }
    let slab = Slab { c0, c1, u: re_w, v: im_w };
    let values = slab.replicates(reps, per, seed, POLAR_STREAMS)?;
    // the area element carries r; the pointwise density does not
    let scale = r / sin_a.abs();
    let (mean, se) = replicate_summary(&values);
    let (mean, se) = (mean * scale, se * scale);
    Ok(DensityEstimate { value: mean, std_error: se, method: Method::Polar, samples: (reps * per) as u64 })
}

/// Which evaluator [`psi`] should use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MethodChoice {
    /// Closed form when one applies, else Cartesian QMC.
    Auto,
    MonteCarlo,
    Polar,
}

/// The closed form valid at `z`, if any.
pub fn psi_closed(z: Complex64, n: usize) -> Result<Option<DensityEstimate>> {
    check_off_axis(z, n)?;
    Ok(if n == 2 {
        Some(psi_n2(z)?)
    } else if z.norm() <= SMALL_ZONE {
        Some(psi_closed_small(z, n)?)
    } else if z.norm() >= LARGE_ZONE {
        Some(psi_closed_large(z, n)?)
    } else {
        None
    })
}

pub fn psi(z: Complex64, n: usize, samples: u64, seed: u64, method: MethodChoice) -> Result<DensityEstimate> {
    match method {
        MethodChoice::Auto => match psi_closed(z, n)? {
            Some(e) => Ok(e),
            None => psi_mc(z, n, samples, seed),
        },
        MethodChoice::MonteCarlo => psi_mc(z, n, samples, seed),
        MethodChoice::Polar => psi_polar(z, n, samples, seed),
    }
}

/// QMC estimate of `A(x₀) = ∫ |Σ k(k+1) t_k x₀^(k−1)|²` over the limiting
/// constraint set, so that `ψ(x₀ + iy) ≈ A(x₀)·|y|` for small `y`.
pub fn repulsion_constant(x0: f64, n: usize, samples: u64, seed: u64) -> Result<DensityEstimate> {
    let spec = RepulsionSpec::new(x0, n)?;
    let (reps, per) = split_samples(samples)?;
    let values = spec.slab().replicates(reps, per, seed, 0)?;
    let (mean, se) = replicate_summary(&values);
    Ok(DensityEstimate { value: mean, std_error: se, method: Method::MonteCarlo, samples: (reps * per) as u64 })
}

/// Exact quadratic repulsion constant.
pub fn repulsion_constant_n2(x0: f64) -> DensityEstimate {
    DensityEstimate { value: closed::repulsion_n2(x0), std_error: 0.0, method: Method::ClosedN2, samples: 0 }
}

/// Sampling effort for region integrals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budget {
    /// Independent replicates; their spread gives the standard error.
    pub replicates: usize,
    /// Stratified points in Ω per replicate.
    pub points: usize,
    /// Inner QMC samples per ψ evaluation without a closed form.
    pub inner: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { replicates: 16, points: 4096, inner: 1024 }
    }
}

/// Unbiased single-stream estimate of ψ(z), for use inside an outer
/// average whose replicates carry the error estimate.
fn psi_point(z: Complex64, n: usize, inner: usize, seed: u64) -> Result<(f64, u64)> {
    if let Some(e) = psi_closed(z, n)? {
        return Ok((e.value, 0));
    }
    let spec = DzSpec::new(z, n)?;
    let v = spec.slab().replicates(1, inner, seed, 0)?;
    Ok((v[0] / z.im.abs(), inner as u64))
}

/// Jittered `g × g` grid in the unit square, `g² ≥ count`.
fn jittered(count: usize, rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    let g = ((count as f64).sqrt().ceil() as usize).max(1);
    let mut out = Vec::with_capacity(g * g);
    for i in 0..g {
        for j in 0..g {
            let u = (i as f64 + rng.gen::<f64>()) / g as f64;
            let v = (j as f64 + rng.gen::<f64>()) / g as f64;
            out.push((u, v));
        }
    }
    out
}

/// One replicate of `∫_P ψ` over a primitive with stratified sampling.
fn primitive_replicate(p: &Primitive, n: usize, budget: &Budget, count: usize, rng: &mut ChaCha8Rng) -> Result<(f64, u64)> {
    let cells = jittered(count, rng);
    // lower-half-plane primitives reuse the mirror image of the upper
    // parametrization, so Ω and its conjugate get identical estimates
    let lower = p.bounding_box().3 <= 0.0;
    let ymap = |v: f64| if lower { 1.0 - v } else { v };
    let mut acc = 0.0;
    let mut evals = 0;
    let mut eval = |z: Complex64, rng: &mut ChaCha8Rng| -> Result<f64> {
        let (v, used) = psi_point(z, n, budget.inner, rng.gen())?;
        evals += used;
        Ok(v)
    };
    let measure = match p {
        Primitive::Rect(_) => {
            let (x0, x1, y0, y1) = p.bounding_box();
            for &(u, v) in &cells {
                acc += eval(Complex64::new(x0 + u * (x1 - x0), y0 + ymap(v) * (y1 - y0)), rng)?;
            }
            (x1 - x0) * (y1 - y0)
        }
        Primitive::Disk(d) => {
            let (c, r) = (d.center(), d.radius());
            for &(u, v) in &cells {
                let turn = if lower { -v } else { v };
                let z = c + Complex64::from_polar(r * u.sqrt(), std::f64::consts::TAU * turn);
                acc += eval(z, rng)?;
            }
            std::f64::consts::PI * r * r
        }
        Primitive::InvertedRect(_) => {
            // ∫_{1/R} ψ = ∫_R ψ(1/w)·|w|^-4
            let (x0, x1, y0, y1) = p.invert().bounding_box();
            // the preimage rectangle lies in the opposite half-plane
            let flip = |v: f64| if lower { v } else { 1.0 - v };
            for &(u, v) in &cells {
                let w = Complex64::new(x0 + u * (x1 - x0), y0 + flip(v) * (y1 - y0));
                acc += eval(w.inv(), rng)? / w.norm_sqr().powi(2);
            }
            (x1 - x0) * (y1 - y0)
        }
    };
    Ok((measure * acc / cells.len() as f64, evals.max(cells.len() as u64)))
}

/// `∫_Ω ψ dν` by stratified sampling of each primitive; replicates are
/// independent, so their spread covers both sampling levels.
pub fn integrate_psi(region: &ComplexRegion, n: usize, budget: Budget, seed: u64) -> Result<DensityEstimate> {
    check_off_axis(Complex64::new(0.0, 1.0), n)?;
    if budget.replicates < 2 || budget.points == 0 || budget.inner == 0 {
        return domain("budget needs at least 2 replicates and positive point counts");
    }
    let total_area = region.area();
    let per_rep: Vec<Result<(f64, u64)>> = (0..budget.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let mut sum = 0.0;
            let mut evals = 0;
            for p in region.primitives() {
                let share = ((budget.points as f64 * p.area() / total_area).round() as usize).max(4);
                let (v, e) = primitive_replicate(p, n, &budget, share, &mut rng)?;
                sum += v;
                evals += e;
            }
            Ok((sum, evals))
        })
        .collect();
    let mut values = Vec::with_capacity(budget.replicates);
    let mut samples = 0;
    for r in per_rep {
        let (v, e) = r?;
        values.push(v);
        samples += e;
    }
    let (mean, se) = replicate_summary(&values);
    Ok(DensityEstimate { value: mean, std_error: se, method: Method::MonteCarlo, samples })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub value: f64,
    pub std_error: f64,
    pub integral: DensityEstimate,
}

/// `Q^(n+1)/(2ζ(n+1)) · ∫_Ω ψ`.
pub fn predicted_count(q: u64, n: usize, region: &ComplexRegion, budget: Budget, seed: u64) -> Result<Prediction> {
    let integral = integrate_psi(region, n, budget, seed)?;
    Ok(prediction_from(q, n, integral)?)
}

/// Scale an existing integral estimate into a count prediction.
pub fn prediction_from(q: u64, n: usize, integral: DensityEstimate) -> Result<Prediction> {
    let factor = (q as f64).powi(n as i32 + 1) / (2.0 * zeta(n as u32 + 1)?);
    Ok(Prediction { value: factor * integral.value, std_error: factor * integral.std_error, integral })
}
