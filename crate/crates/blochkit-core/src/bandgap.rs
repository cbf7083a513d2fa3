//! Band-gap detection: real criterion |f| > 1, complex criterion local
//! maxima of |Im κ|, and the gap cascade below a real pole.

use crate::dispersion1d::{rhs_f, solve_kappa};
use crate::error::{Error, Result};
use crate::permittivity::{contrast, eval_permittivity, singular_frequencies, MaterialParams};
use crate::scalar::Real;

/// Edge tolerance in ω for bisection refinement.
pub const EDGE_TOL: f64 = 1e-10;
/// Tolerance of the golden-section peak search.
pub const PEAK_TOL: f64 = 1e-8;
/// Exclusion half-width around a pole.
pub const POLE_EXCLUSION: f64 = 1e-10;
/// Iteration cap of the bracketed root finder.
pub const ROOT_MAX_ITER: usize = 100;
/// |Im κ| values below this are treated as exactly zero.
pub const IM_FLOOR: f64 = 1e-12;
/// Relative inner exclusion used by [`envelope_near_pole`].
pub const ENVELOPE_INNER: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapKind {
    RealCriterion,
    ComplexCriterion,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandGap<T: Real> {
    pub lo: T,
    pub hi: T,
    pub kind: GapKind,
    pub peak_im_kappa: T,
    pub peak_omega: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Below,
    Above,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapCascade<T: Real> {
    pub pole: T,
    pub side: Side,
    pub gaps: Vec<BandGap<T>>,
    /// Frequencies where sin(ρσ₀) = ±1, ordered toward the pole.
    pub sentinel_points: Vec<T>,
    /// sin(ρσ₀) at each sentinel (±1).
    pub sentinel_sin: Vec<T>,
    /// f(ω) at each sentinel.
    pub sentinel_f: Vec<T>,
}

/// Bracketed root of `g` on `[a, b]`, alternating secant and bisection steps.
pub fn bracket_root<T: Real, G>(mut g: G, a: T, b: T, xtol: T) -> Result<T>
where
    G: FnMut(T) -> Result<T>,
{
    let (mut a, mut b) = (a, b);
    let (mut ga, mut gb) = (g(a)?, g(b)?);
    if ga == T::zero() {
        return Ok(a);
    }
    if gb == T::zero() {
        return Ok(b);
    }
    if (ga > T::zero()) == (gb > T::zero()) {
        return Err(Error::InvalidInput("root not bracketed".into()));
    }
    let half = T::lit(0.5);
    for it in 0..ROOT_MAX_ITER {
        if (b - a).abs() <= xtol {
            break;
        }
        let mid = a + (b - a) * half;
        let mut x = if it % 2 == 0 { a - ga * (b - a) / (gb - ga) } else { mid };
        // keep secant steps strictly inside the bracket
        let lo = a.min(b);
        let hi = a.max(b);
        if !(x > lo && x < hi) {
            x = mid;
        }
        let gx = g(x)?;
        if gx == T::zero() {
            return Ok(x);
        }
        if (gx > T::zero()) == (ga > T::zero()) {
            a = x;
            ga = gx;
        } else {
            b = x;
            gb = gx;
        }
    }
    Ok(if ga.abs() <= gb.abs() { a } else { b })
}

/// Plain bisection to `xtol`; `g(a)` and `g(b)` must differ in sign.
pub fn bisect<T: Real, G>(mut g: G, a: T, b: T, xtol: T) -> Result<T>
where
    G: FnMut(T) -> Result<T>,
{
    let (mut a, mut b) = (a, b);
    let ga = g(a)?;
    let pos_a = ga > T::zero();
    for _ in 0..200 {
        if (b - a).abs() <= xtol {
            break;
        }
        let m = a + (b - a) * T::lit(0.5);
        if m == a || m == b {
            break;
        }
        if (g(m)? > T::zero()) == pos_a {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(a + (b - a) * T::lit(0.5))
}

/// Golden-section maximisation of `h` on `[a, b]`.
pub fn golden_max<T: Real, H>(mut h: H, a: T, b: T, tol: T) -> (T, T)
where
    H: FnMut(T) -> T,
{
    let r = T::lit(0.618_033_988_749_894_8);
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut hc, mut hd) = (h(c), h(d));
    let mut iter = 0;
    while (b - a) > tol && iter < 200 {
        if hc >= hd {
            b = d;
            d = c;
            hd = hc;
            c = b - r * (b - a);
            hc = h(c);
        } else {
            a = c;
            c = d;
            hc = hd;
            d = a + r * (b - a);
            hd = h(d);
        }
        iter += 1;
    }
    if hc >= hd {
        (c, hc)
    } else {
        (d, hd)
    }
}

fn grid<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    let step = (hi - lo) / T::from_usize(n - 1).unwrap_or_else(T::one);
    (0..n)
        .map(|k| if k + 1 == n { hi } else { lo + step * T::from_usize(k).unwrap_or_else(T::zero) })
        .collect()
}

fn abs_f_minus_one<T: Real>(p: &MaterialParams<T>, w: T) -> Result<T> {
    Ok(rhs_f(p, w)?.norm() - T::one())
}

fn im_kappa<T: Real>(p: &MaterialParams<T>, w: T) -> T {
    match solve_kappa(p, w) {
        Ok(b) => b.kappa_plus.im.abs(),
        Err(_) => T::zero(),
    }
}

fn check_range<T: Real>(lo: T, hi: T, n: usize, min_n: usize) -> Result<()> {
    if !(lo < hi) {
        return Err(Error::InvalidInput("empty frequency range".into()));
    }
    if n < min_n {
        return Err(Error::InvalidInput(format!("need at least {min_n} samples")));
    }
    Ok(())
}

/// Maximal runs of the grid where |f(ω)| > 1, edges refined by bisection.
pub fn find_gaps_real<T: Real>(p: &MaterialParams<T>, lo: T, hi: T, n: usize) -> Result<Vec<BandGap<T>>> {
    check_range(lo, hi, n, 2)?;
    let ws = grid(lo, hi, n);
    let tol = T::lit(1e-12);
    // None marks a point skipped near a pole
    let mut state: Vec<Option<bool>> = Vec::with_capacity(n);
    for &w in &ws {
        match eval_permittivity(p, w) {
            Ok(eps) => {
                if eps.im.abs() > tol {
                    return Err(Error::ComplexPermittivity { omega: w.as_f64(), im: eps.im.as_f64() });
                }
                match abs_f_minus_one(p, w) {
                    Ok(g) => state.push(Some(g > T::zero())),
                    Err(_) => state.push(None),
                }
            }
            Err(Error::SingularFrequency { .. }) => state.push(None),
            Err(e) => return Err(e),
        }
    }
    let etol = T::lit(EDGE_TOL);
    let g = |w: T| abs_f_minus_one(p, w);
    let mut gaps = Vec::new();
    let mut k = 0;
    while k < n {
        if state[k] != Some(true) {
            k += 1;
            continue;
        }
        let start = k;
        while k + 1 < n && state[k + 1] == Some(true) {
            k += 1;
        }
        let end = k;
        let left = if start > 0 && state[start - 1] == Some(false) {
            bisect(g, ws[start - 1], ws[start], etol)?
        } else {
            ws[start]
        };
        let right = if end + 1 < n && state[end + 1] == Some(false) {
            bisect(g, ws[end], ws[end + 1], etol)?
        } else {
            ws[end]
        };
        if right > left {
            let (mut best, mut best_w) = (T::zero(), ws[start]);
            for &w in &ws[start..=end] {
                let v = im_kappa(p, w);
                if v > best {
                    best = v;
                    best_w = w;
                }
            }
            let a = if best_w > left { (best_w - (ws[1] - ws[0])).max(left) } else { left };
            let b = (best_w + (ws[1] - ws[0])).min(right);
            let (pw, pv) = golden_max(|w| im_kappa(p, w), a, b, T::lit(PEAK_TOL));
            let (pw, pv) = if pv >= best { (pw, pv) } else { (best_w, best) };
            gaps.push(BandGap { lo: left, hi: right, kind: GapKind::RealCriterion, peak_im_kappa: pv, peak_omega: pw });
        }
        k += 1;
    }
    Ok(gaps)
}

/// Local maxima of |Im κ| on the grid, refined by golden section.
pub fn find_gaps_complex<T: Real>(p: &MaterialParams<T>, lo: T, hi: T, n: usize) -> Result<Vec<BandGap<T>>> {
    check_range(lo, hi, n, 3)?;
    let ws = grid(lo, hi, n);
    let floor = T::lit(IM_FLOOR);
    let vals: Vec<Option<T>> = ws
        .iter()
        .map(|&w| {
            solve_kappa(p, w).ok().map(|b| {
                let v = b.kappa_plus.im.abs();
                if v < floor {
                    T::zero()
                } else {
                    v
                }
            })
        })
        .collect();
    // runs of equal values; None breaks runs
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut k = 0;
    while k < n {
        let s = k;
        while k + 1 < n && vals[k + 1].is_some() && vals[k + 1] == vals[s] {
            k += 1;
        }
        runs.push((s, k));
        k += 1;
    }
    let h = |w: T| im_kappa(p, w);
    let half = T::lit(0.5);
    let mut gaps = Vec::new();
    for r in 1..runs.len().saturating_sub(1) {
        let (s, e) = runs[r];
        let (Some(v), Some(vl), Some(vr)) = (vals[s], vals[runs[r - 1].1], vals[runs[r + 1].0]) else {
            continue;
        };
        if !(v > vl && v > vr && v > T::zero()) {
            continue;
        }
        let (peak_w, peak_v) = if s == e {
            let (pw, pv) = golden_max(h, ws[s - 1], ws[s + 1], T::lit(PEAK_TOL));
            if pv >= v {
                (pw, pv)
            } else {
                (ws[s], v)
            }
        } else {
            ((ws[s] + ws[e]) * half, v)
        };
        // bases: walk downhill on each side
        let mut il = s;
        while il > 0 && matches!((vals[il - 1], vals[il]), (Some(a), Some(b)) if a <= b) {
            il -= 1;
        }
        let mut ir = e;
        while ir + 1 < n && matches!((vals[ir + 1], vals[ir]), (Some(a), Some(b)) if a <= b) {
            ir += 1;
        }
        let base = vals[il].unwrap_or(T::zero()).max(vals[ir].unwrap_or(T::zero()));
        let thr = peak_v - (peak_v - base) * half;
        let mut jl = s;
        while jl > il && vals[jl].is_some_and(|x| x > thr) {
            jl -= 1;
        }
        let mut jr = e;
        while jr < ir && vals[jr].is_some_and(|x| x > thr) {
            jr += 1;
        }
        let g = |w: T| Ok(h(w) - thr);
        let etol = T::lit(EDGE_TOL);
        let left = if jl < s { bisect(g, ws[jl], ws[jl + 1], etol)? } else { ws[s] };
        let right = if jr > e { bisect(g, ws[jr - 1], ws[jr], etol)? } else { ws[e] };
        let (left, right) = if right > left { (left, right) } else { (ws[s - 1], ws[e + 1]) };
        gaps.push(BandGap {
            lo: left,
            hi: right,
            kind: GapKind::ComplexCriterion,
            peak_im_kappa: peak_v,
            peak_omega: peak_w.max(left).min(right),
        });
    }
    Ok(gaps)
}

// ρσ₀ as a function of the distance d to the pole on a given side.
struct PoleBranch<'a, T: Real> {
    p: &'a MaterialParams<T>,
    pole: T,
    side: Side,
}

impl<T: Real> PoleBranch<'_, T> {
    fn omega(&self, d: T) -> T {
        match self.side {
            Side::Below => self.pole - d,
            Side::Above => self.pole + d,
        }
    }

    fn phase(&self, d: T) -> Result<T> {
        let w = self.omega(d);
        let c = contrast(self.p, w)?;
        Ok(c.rho1 * w * (self.p.eps0 * self.p.mu0).sqrt())
    }

    fn oscillatory(&self, d: T) -> Result<bool> {
        let c = contrast(self.p, self.omega(d))?;
        Ok(c.rho2.abs() <= T::lit(1e-12) * c.rho1.abs().max(T::one()))
    }

    // distance where the phase equals `target`, searching in [lo, hi]
    fn distance_at(&self, target: T, lo: T, hi: T) -> Result<T> {
        let tol = lo * T::lit(1e-12);
        bracket_root(|d| Ok(self.phase(d)? - target), lo, hi, tol.max(T::min_positive_value()))
    }
}

fn real_pole<T: Real>(p: &MaterialParams<T>) -> Result<T> {
    if p.gamma > T::zero() {
        return Err(Error::DampedModel { gamma: p.gamma.as_f64() });
    }
    if p.beta == T::zero() || p.alpha.norm() == T::zero() {
        return Err(Error::NoPole);
    }
    if !p.alpha_is_real() {
        return Err(Error::InvalidInput("cascade needs a real alpha".into()));
    }
    Ok(singular_frequencies(p)?.omega_plus.re)
}

/// Gaps accumulating at the real pole ω* on one side.
pub fn cascade_near_pole<T: Real>(p: &MaterialParams<T>, delta: T, side: Side, max_gaps: usize) -> Result<GapCascade<T>> {
    let pole = real_pole(p)?;
    if !(delta > T::zero()) || (side == Side::Below && delta >= pole) {
        return Err(Error::InvalidInput("delta out of range".into()));
    }
    let br = PoleBranch { p, pole, side };
    let eta = T::lit(POLE_EXCLUSION);
    if !br.oscillatory(eta)? {
        return Err(Error::Domain("permittivity is negative on this side of the pole".into()));
    }
    let pi = T::PI();
    let half_pi = T::FRAC_PI_2();
    let phi_far = br.phase(delta)?;
    let phi_near = br.phase(eta)?;
    let mut n = ((phi_far - half_pi) / pi).floor() + T::one();
    let mut out = GapCascade {
        pole,
        side,
        gaps: Vec::new(),
        sentinel_points: Vec::new(),
        sentinel_sin: Vec::new(),
        sentinel_f: Vec::new(),
    };
    let etol = T::lit(EDGE_TOL);
    let mut d_outer = delta;
    while out.gaps.len() < max_gaps {
        let target = half_pi + n * pi;
        if target + half_pi >= phi_near {
            break;
        }
        let d_s = br.distance_at(target, eta, d_outer)?;
        let lower = target - half_pi;
        let d_far = if lower > phi_far { br.distance_at(lower, d_s, d_outer)? } else { delta };
        let d_near = br.distance_at(target + half_pi, eta, d_s)?;
        let w_s = br.omega(d_s);
        let f_s = rhs_f(p, w_s)?.re;
        let sin_s = if (n.to_i64().unwrap_or(0)).rem_euclid(2) == 0 { T::one() } else { -T::one() };
        out.sentinel_points.push(w_s);
        out.sentinel_sin.push(sin_s);
        out.sentinel_f.push(f_s);
        let g = |d: T| abs_f_minus_one(p, br.omega(d));
        if g(d_s)? > T::zero() {
            let e_far = if g(d_far)? > T::zero() { d_far } else { bisect(g, d_s, d_far, etol)? };
            let e_near = bisect(g, d_near, d_s, etol)?;
            let (lo, hi) = match side {
                Side::Below => (br.omega(e_far), br.omega(e_near)),
                Side::Above => (br.omega(e_near), br.omega(e_far)),
            };
            out.gaps.push(BandGap {
                lo,
                hi,
                kind: GapKind::RealCriterion,
                peak_im_kappa: im_kappa(p, w_s),
                peak_omega: w_s,
            });
        }
        d_outer = d_s;
        n = n + T::one();
    }
    Ok(out)
}

/// Max |Im κ| over `[ω* - δ, ω*)` for each δ, sampled uniformly and at the
/// cascade sentinels down to a relative inner exclusion.
pub fn envelope_near_pole<T: Real>(p: &MaterialParams<T>, deltas: &[T]) -> Result<Vec<(T, T)>> {
    if p.gamma > T::zero() {
        return Err(Error::DampedModel { gamma: p.gamma.as_f64() });
    }
    if p.beta == T::zero() {
        return Err(Error::NoPole);
    }
    if p.alpha.norm() == T::zero() {
        return Ok(deltas.iter().map(|&d| (d, T::zero())).collect());
    }
    let pole = real_pole(p)?;
    let side = if p.alpha.re > T::zero() { Side::Below } else { Side::Above };
    let br = PoleBranch { p, pole, side };
    let half_pi = T::FRAC_PI_2();
    let mut out = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        if !(delta > T::zero()) || (side == Side::Below && delta >= pole) {
            return Err(Error::InvalidInput("delta out of range".into()));
        }
        let inner = (delta * T::lit(ENVELOPE_INNER)).max(T::lit(POLE_EXCLUSION));
        let hd = |d: T| im_kappa(p, br.omega(d));
        let mut best = T::zero();
        for d in grid(inner, delta, 257) {
            best = best.max(hd(d));
        }
        let phi_far = br.phase(delta)?;
        let phi_near = br.phase(inner)?;
        // quarter-period marks; odd multiples of π/2 are sentinels
        let mut j = (phi_far / half_pi).floor() + T::one();
        let mut marks: Vec<(T, T)> = Vec::new();
        let mut d_prev = delta;
        while j * half_pi < phi_near {
            let d = br.distance_at(j * half_pi, inner, d_prev)?;
            marks.push((j, d));
            d_prev = d;
            j = j + T::one();
        }
        for (idx, &(jj, d)) in marks.iter().enumerate() {
            if (jj.to_i64().unwrap_or(0)).rem_euclid(2) == 0 {
                continue;
            }
            let a = if idx > 0 { marks[idx - 1].1 } else { delta };
            let b = if idx + 1 < marks.len() { marks[idx + 1].1 } else { inner };
            best = best.max(hd(d));
            let (_, v) = golden_max(hd, b, a, (a - b).abs() * T::lit(1e-9));
            best = best.max(v);
        }
        out.push((delta, best));
    }
    Ok(out)
}
