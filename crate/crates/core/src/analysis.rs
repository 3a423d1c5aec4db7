//! Post-processing: Fourier components of G(t), exponential entropy decay
//! fits, curve crossings and finite-size scaling collapse.

use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};

#[inline]
fn c<T: Float>(x: f64) -> T {
    T::from(x).expect("representable constant")
}

pub fn mean<T: Float>(xs: &[T]) -> T {
    if xs.is_empty() {
        return T::nan();
    }
    xs.iter().fold(T::zero(), |a, &b| a + b) / c(xs.len() as f64)
}

/// Sample standard deviation (n - 1 denominator).
pub fn std_dev<T: Float>(xs: &[T]) -> T {
    if xs.len() < 2 {
        return T::zero();
    }
    let m = mean(xs);
    let ss = xs.iter().fold(T::zero(), |a, &x| a + (x - m) * (x - m));
    (ss / c((xs.len() - 1) as f64)).sqrt()
}

pub fn std_err<T: Float>(xs: &[T]) -> T {
    std_dev(xs) / c::<T>(xs.len() as f64).sqrt()
}

/// |(2/T') sum_{t<T'} exp(2 pi i t / lambda) G(t)|.
pub fn fourier_g<T: Float>(g: &[T], lambda: usize) -> Result<T> {
    if lambda == 0 || g.is_empty() || !g.len().is_multiple_of(lambda) {
        return Err(Error::Config(format!(
            "series length {} is not a positive multiple of the period {lambda}",
            g.len()
        )));
    }
    let (mut re, mut im) = (T::zero(), T::zero());
    let two_pi: T = c(2.0 * std::f64::consts::PI);
    for (t, &v) in g.iter().enumerate() {
        // Reduce the phase exactly before converting.
        let k = t % lambda;
        let phase = two_pi * c(k as f64) / c(lambda as f64);
        re = re + v * phase.cos();
        im = im + v * phase.sin();
    }
    Ok(c::<T>(2.0) / c(g.len() as f64) * re.hypot(im))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Asymptote<T> {
    Fixed(T),
    /// Mean of the last n samples.
    TailMean(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecayFit<T> {
    pub gamma: T,
    /// Infinite when no decay is detected.
    pub tau: T,
    pub s_inf: T,
    pub samples: usize,
}

/// Least-squares slope of ln(S(t) - S_inf) over t >= 1 with
/// S(t) - S_inf > eps.
pub fn fit_decay<T: Float>(s: &[T], asymptote: Asymptote<T>, eps: T) -> Result<DecayFit<T>> {
    if s.len() < 2 {
        return Err(Error::InsufficientData("need S(0) and at least one later sample".into()));
    }
    let s_inf = match asymptote {
        Asymptote::Fixed(v) => v,
        Asymptote::TailMean(n) => {
            let n = n.clamp(1, s.len() - 1);
            mean(&s[s.len() - n..])
        }
    };
    let window: Vec<(T, T)> = s
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &v)| v - s_inf > eps)
        .map(|(t, &v)| (c(t as f64), (v - s_inf).ln()))
        .collect();
    let no_decay = DecayFit {
        gamma: T::zero(),
        tau: T::infinity(),
        s_inf,
        samples: window.len(),
    };
    if window.is_empty() {
        return if s[0] - s_inf > eps {
            Err(Error::InsufficientData("the series reaches its asymptote after one step".into()))
        } else {
            Ok(no_decay)
        };
    }
    if window.len() < 2 {
        return Err(Error::InsufficientData("a single decaying sample".into()));
    }
    let (xs, ys): (Vec<T>, Vec<T>) = window.into_iter().unzip();
    let line = linear_fit(&xs, &ys, None)?;
    let gamma = -line.slope;
    if gamma <= T::zero() {
        return Ok(no_decay);
    }
    Ok(DecayFit {
        gamma,
        tau: gamma.recip(),
        s_inf,
        samples: xs.len(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Line<T> {
    pub intercept: T,
    pub slope: T,
    pub intercept_err: T,
    pub slope_err: T,
}

/// Weighted (1/err^2) or ordinary least-squares line. Without weights the
/// errors come from the residual variance.
pub fn linear_fit<T: Float>(xs: &[T], ys: &[T], errs: Option<&[T]>) -> Result<Line<T>> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return Err(Error::InsufficientData("a line needs two points".into()));
    }
    let w: Vec<T> = match errs {
        Some(e) => e.iter().map(|&s| (s * s).max(c(1e-300)).recip()).collect(),
        None => vec![T::one(); n],
    };
    let (mut k, mut kx, mut kxx, mut ky, mut kxy) = (T::zero(), T::zero(), T::zero(), T::zero(), T::zero());
    for i in 0..n {
        k = k + w[i];
        kx = kx + w[i] * xs[i];
        kxx = kxx + w[i] * xs[i] * xs[i];
        ky = ky + w[i] * ys[i];
        kxy = kxy + w[i] * xs[i] * ys[i];
    }
    let det = k * kxx - kx * kx;
    if det <= T::zero() {
        return Err(Error::InsufficientData("degenerate abscissae".into()));
    }
    let slope = (k * kxy - kx * ky) / det;
    let intercept = (kxx * ky - kx * kxy) / det;
    let scale = if errs.is_some() || n < 3 {
        T::one()
    } else {
        let rss = (0..n).fold(T::zero(), |a, i| {
            let r = ys[i] - intercept - slope * xs[i];
            a + r * r
        });
        rss / c((n - 2) as f64)
    };
    Ok(Line {
        intercept,
        slope,
        intercept_err: (scale * kxx / det).sqrt(),
        slope_err: (scale * k / det).sqrt(),
    })
}

/// First abscissa where two curves sampled on the same grid cross, by
/// linear interpolation of their difference.
pub fn crossing<T: Float>(p: &[T], a: &[T], b: &[T]) -> Option<T> {
    let d: Vec<T> = a.iter().zip(b).map(|(&x, &y)| x - y).collect();
    for i in 0..d.len().saturating_sub(1) {
        if d[i] == T::zero() {
            return Some(p[i]);
        }
        if (d[i] < T::zero()) != (d[i + 1] < T::zero()) && d[i + 1] != T::zero() {
            return Some(p[i] + (p[i + 1] - p[i]) * d[i] / (d[i] - d[i + 1]));
        }
    }
    d.last().filter(|v| v.is_zero()).map(|_| p[p.len() - 1])
}

/// One observation y(p, L) with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CollapsePoint<T> {
    pub size: usize,
    pub p: T,
    pub y: T,
    pub err: T,
}

/// Houdayer-Hartmann quality of the collapse of y against
/// (p - p_c) L^(1/nu): mean squared deviation of each point from a
/// weighted line through the bracketing points of the other sizes, in
/// units of the combined variance. `None` when no point is bracketed.
pub fn collapse_quality<T: Float>(points: &[CollapsePoint<T>], pc: T, nu: T) -> Option<T> {
    let floor: T = c(1e-6);
    let x = |pt: &CollapsePoint<T>| (pt.p - pc) * c::<T>(pt.size as f64).powf(nu.recip());
    let mut sizes: Vec<usize> = points.iter().map(|p| p.size).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let curves: Vec<Vec<(T, T, T)>> = sizes
        .iter()
        .map(|&l| {
            let mut v: Vec<(T, T, T)> = points
                .iter()
                .filter(|p| p.size == l)
                .map(|p| (x(p), p.y, p.err.max(floor)))
                .collect();
            v.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
            v
        })
        .collect();
    let (mut total, mut count) = (T::zero(), 0usize);
    for (si, curve) in curves.iter().enumerate() {
        for &(xi, yi, ei) in curve {
            let (mut k, mut kx, mut kxx, mut ky, mut kxy) = (T::zero(), T::zero(), T::zero(), T::zero(), T::zero());
            let mut used = 0;
            for (sj, other) in curves.iter().enumerate() {
                if sj == si {
                    continue;
                }
                let Some(j) = other.windows(2).position(|w| w[0].0 <= xi && xi <= w[1].0) else {
                    continue;
                };
                for &(xj, yj, ej) in &other[j..j + 2] {
                    let w = (ej * ej).recip();
                    k = k + w;
                    kx = kx + w * xj;
                    kxx = kxx + w * xj * xj;
                    ky = ky + w * yj;
                    kxy = kxy + w * xj * yj;
                }
                used += 1;
            }
            if used == 0 {
                continue;
            }
            let det = k * kxx - kx * kx;
            if det <= T::zero() {
                continue;
            }
            let yhat = (kxx * ky - kx * kxy + xi * (k * kxy - kx * ky)) / det;
            let var = (kxx - c::<T>(2.0) * xi * kx + xi * xi * k) / det;
            total = total + (yi - yhat) * (yi - yhat) / (ei * ei + var.max(T::zero()));
            count += 1;
        }
    }
    (count > 0).then(|| total / c(count as f64))
}

/// Nelder-Mead minimization in two dimensions.
pub fn nelder_mead<T: Float>(f: impl Fn(T, T) -> T, start: [T; 2], step: [T; 2], iterations: usize) -> ([T; 2], T) {
    let mut simplex = [
        start,
        [start[0] + step[0], start[1]],
        [start[0], start[1] + step[1]],
    ];
    let mut vals = simplex.map(|v| f(v[0], v[1]));
    let half: T = c(0.5);
    let two: T = c(2.0);
    for _ in 0..iterations {
        let mut idx = [0, 1, 2];
        idx.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap_or(std::cmp::Ordering::Equal));
        let (best, mid, worst) = (idx[0], idx[1], idx[2]);
        let centroid = [
            (simplex[best][0] + simplex[mid][0]) * half,
            (simplex[best][1] + simplex[mid][1]) * half,
        ];
        let along = |t: T| {
            [
                centroid[0] + t * (simplex[worst][0] - centroid[0]),
                centroid[1] + t * (simplex[worst][1] - centroid[1]),
            ]
        };
        let r = along(-T::one());
        let fr = f(r[0], r[1]);
        if fr < vals[best] {
            let e = along(-two);
            let fe = f(e[0], e[1]);
            (simplex[worst], vals[worst]) = if fe < fr { (e, fe) } else { (r, fr) };
        } else if fr < vals[mid] {
            (simplex[worst], vals[worst]) = (r, fr);
        } else {
            let k = if fr < vals[worst] { along(-half) } else { along(half) };
            let fk = f(k[0], k[1]);
            if fk < vals[worst].min(fr) {
                (simplex[worst], vals[worst]) = (k, fk);
            } else {
                for i in [mid, worst] {
                    simplex[i] = [
                        simplex[best][0] + half * (simplex[i][0] - simplex[best][0]),
                        simplex[best][1] + half * (simplex[i][1] - simplex[best][1]),
                    ];
                    vals[i] = f(simplex[i][0], simplex[i][1]);
                }
            }
        }
        let spread = (vals[worst] - vals[best]).abs();
        if spread < c(1e-12) && (simplex[worst][0] - simplex[best][0]).abs() < c(1e-9) {
            break;
        }
    }
    let best = (0..3)
        .min_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap();
    (simplex[best], vals[best])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CollapseSearch<T> {
    pub pc_range: (T, T),
    pub nu_range: (T, T),
    /// Grid points per axis for the starting point.
    pub grid: usize,
    pub bootstrap: usize,
    pub seed: u64,
}

impl<T: Float> Default for CollapseSearch<T> {
    fn default() -> Self {
        CollapseSearch {
            pc_range: (c(0.0), c(1.0)),
            nu_range: (c(0.5), c(3.0)),
            grid: 25,
            bootstrap: 100,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Criticality<T> {
    pub pc: T,
    pub pc_err: T,
    pub nu: T,
    pub nu_err: T,
    pub quality: T,
}

fn best_collapse<T: Float>(points: &[CollapsePoint<T>], search: &CollapseSearch<T>) -> Option<([T; 2], T)> {
    let penalty: T = c(1e12);
    let (p0, p1) = search.pc_range;
    let (n0, n1) = search.nu_range;
    let objective = |pc: T, nu: T| {
        if nu < n0 || nu > n1 || pc < p0 || pc > p1 {
            return penalty;
        }
        collapse_quality(points, pc, nu).unwrap_or(penalty)
    };
    let g = search.grid.max(2);
    let mut start: Option<([T; 2], T)> = None;
    for i in 0..g {
        for j in 0..g {
            let pc = p0 + (p1 - p0) * c(i as f64) / c((g - 1) as f64);
            let nu = n0 + (n1 - n0) * c(j as f64) / c((g - 1) as f64);
            let q = objective(pc, nu);
            if start.is_none_or(|(_, b)| q < b) {
                start = Some(([pc, nu], q));
            }
        }
    }
    let (s, q0) = start?;
    if q0 >= penalty {
        return None;
    }
    let step = [(p1 - p0) / c(g as f64), (n1 - n0) / c(g as f64)];
    Some(nelder_mead(objective, s, step, 400))
}

/// Minimizes the collapse quality over (p_c, nu); errors from a parametric
/// bootstrap that redraws every y from a normal with its standard error.
pub fn estimate_criticality<T: Float>(points: &[CollapsePoint<T>], search: &CollapseSearch<T>) -> Result<Criticality<T>> {
    let mut sizes: Vec<usize> = points.iter().map(|p| p.size).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 2 {
        return Err(Error::InsufficientData("a collapse needs at least two sizes".into()));
    }
    let ([pc, nu], quality) =
        best_collapse(points, search).ok_or_else(|| Error::InsufficientData("no overlapping curves".into()))?;
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(search.seed);
    let (mut pcs, mut nus) = (Vec::new(), Vec::new());
    for _ in 0..search.bootstrap {
        let resampled: Vec<CollapsePoint<T>> = points
            .iter()
            .map(|p| {
                let z: f64 = StandardNormal.sample(&mut rng);
                CollapsePoint {
                    y: p.y + p.err * c(z),
                    ..*p
                }
            })
            .collect();
        if let Some(([a, b], _)) = best_collapse(&resampled, search) {
            pcs.push(a);
            nus.push(b);
        }
    }
    Ok(Criticality {
        pc,
        pc_err: std_dev(&pcs),
        nu,
        nu_err: std_dev(&nus),
        quality,
    })
}

/// Resamples rows with replacement and returns the spread of `stat`.
pub fn bootstrap_std<T: Float, R: Rng + ?Sized>(
    rows: &[Vec<T>],
    resamples: usize,
    rng: &mut R,
    stat: impl Fn(&[Vec<T>]) -> Option<T>,
) -> T {
    if rows.is_empty() {
        return T::nan();
    }
    let mut values = Vec::with_capacity(resamples);
    let mut pick: Vec<Vec<T>> = Vec::with_capacity(rows.len());
    for _ in 0..resamples {
        pick.clear();
        for _ in 0..rows.len() {
            pick.push(rows[rng.gen_range(0..rows.len())].clone());
        }
        if let Some(v) = stat(&pick) {
            if v.is_finite() {
                values.push(v);
            }
        }
    }
    std_dev(&values)
}

/// Per-time mean of equally long series.
pub fn mean_series<T: Float>(rows: &[Vec<T>]) -> Vec<T> {
    let len = rows.first().map_or(0, Vec::len);
    (0..len)
        .map(|t| rows.iter().fold(T::zero(), |a, r| a + r[t]) / c(rows.len() as f64))
        .collect()
}
