//! Right half-plane zeros of the dispersion function.
//!
//! Zeros are counted with the argument principle on a rectangle whose left
//! edge is the imaginary axis (where the Landau-continued response is used),
//! then isolated by recursive bisection and polished with Newton's method.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dispersion::{dispersion_continued, PumpPoint};
use super::landau::coupling_prefactor;
use crate::{Error, Result, SystemParams};

/// Search rectangle and sampling controls. `None` extents are derived from
/// the parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootSearch {
    pub re_max: Option<f64>,
    pub im_max: Option<f64>,
    /// Initial samples per rectangle edge.
    pub edge_samples: usize,
    /// `|D|` below this fraction of its largest term counts as a zero on the
    /// contour.
    pub zero_tolerance: f64,
}

impl Default for RootSearch {
    fn default() -> Self {
        RootSearch { re_max: None, im_max: None, edge_samples: 96, zero_tolerance: 1e-10 }
    }
}

/// Result of a right half-plane root search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthAnalysis {
    /// Zeros inside the search rectangle by the argument principle.
    pub zero_count: usize,
    /// Newton-polished zeros, sorted by decreasing real part.
    pub roots: Vec<Complex64>,
    pub re_max: f64,
    pub im_max: f64,
}

impl GrowthAnalysis {
    pub fn is_unstable(&self) -> bool {
        self.zero_count > 0
    }

    /// Root with the largest real part, if any.
    pub fn dominant(&self) -> Option<Complex64> {
        self.roots.first().copied()
    }
}

#[derive(Debug, Clone, Copy)]
struct Rect {
    re0: f64,
    re1: f64,
    im0: f64,
    im1: f64,
}

impl Rect {
    fn contains(&self, z: Complex64, slack: f64) -> bool {
        z.re >= self.re0 - slack
            && z.re <= self.re1 + slack
            && z.im >= self.im0 - slack
            && z.im <= self.im1 + slack
    }

    fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re0 + self.re1), 0.5 * (self.im0 + self.im1))
    }

    fn diameter(&self) -> f64 {
        (self.re1 - self.re0).hypot(self.im1 - self.im0)
    }
}

enum Winding {
    Count(usize),
    /// The contour passes through (or numerically on top of) a zero.
    OnContour,
}

struct Searcher<'a> {
    point: &'a PumpPoint,
    params: &'a SystemParams,
    cfg: &'a RootSearch,
}

impl Searcher<'_> {
    fn eval(&self, s: Complex64) -> Option<Complex64> {
        let d = dispersion_continued(s, self.point, self.params);
        if d.value.norm() <= self.cfg.zero_tolerance * d.scale {
            None
        } else {
            Some(d.value)
        }
    }

    /// Accumulated change of `arg D` from `a` to `b`, refined until every
    /// piece changes by less than 0.3 rad and halves agree with the whole.
    fn edge_phase(
        &self,
        a: Complex64,
        b: Complex64,
        fa: Complex64,
        fb: Complex64,
        depth: u32,
    ) -> Option<f64> {
        let whole = (fb / fa).arg();
        let m = 0.5 * (a + b);
        let fm = self.eval(m)?;
        let left = (fm / fa).arg();
        let right = (fb / fm).arg();
        if depth >= 40 || (whole.abs() < 0.3 && (left + right - whole).abs() < 1e-9) {
            return Some(left + right);
        }
        Some(self.edge_phase(a, m, fa, fm, depth + 1)? + self.edge_phase(m, b, fm, fb, depth + 1)?)
    }

    fn winding(&self, r: &Rect) -> Result<Winding> {
        let corners = [
            Complex64::new(r.re0, r.im0),
            Complex64::new(r.re1, r.im0),
            Complex64::new(r.re1, r.im1),
            Complex64::new(r.re0, r.im1),
        ];
        let n = self.cfg.edge_samples.max(4);
        let mut total = 0.0;
        for e in 0..4 {
            let (a, b) = (corners[e], corners[(e + 1) % 4]);
            let mut prev = a;
            let Some(mut fprev) = self.eval(a) else { return Ok(Winding::OnContour) };
            for k in 1..=n {
                let z = a + (b - a) * (k as f64 / n as f64);
                let Some(fz) = self.eval(z) else { return Ok(Winding::OnContour) };
                match self.edge_phase(prev, z, fprev, fz, 0) {
                    Some(d) => total += d,
                    None => return Ok(Winding::OnContour),
                }
                prev = z;
                fprev = fz;
            }
        }
        let turns = total / TAU;
        let count = turns.round();
        if (turns - count).abs() > 0.05 || count < 0.0 {
            return Err(Error::numerical(format!("argument principle gave {turns} turns")));
        }
        Ok(Winding::Count(count as usize))
    }

    /// Winding number, nudging the rectangle edges (except the imaginary-axis
    /// edge) when the contour runs through a zero.
    fn count_robust(&self, r: &Rect, movable_left: bool) -> Result<(Rect, usize)> {
        let mut rect = *r;
        for attempt in 0..8 {
            match self.winding(&rect)? {
                Winding::Count(c) => return Ok((rect, c)),
                Winding::OnContour => {
                    let w = (rect.re1 - rect.re0).min(rect.im1 - rect.im0);
                    let nudge = w * 1e-3 * (1.0 + attempt as f64);
                    rect.re1 += nudge * 0.73;
                    rect.im0 -= nudge * 0.61;
                    rect.im1 += nudge * 0.89;
                    if movable_left || rect.re0 == 0.0 {
                        // a zero on the imaginary axis is marginal, not unstable
                        rect.re0 += nudge * 0.53;
                    }
                }
            }
        }
        Err(Error::numerical("contour repeatedly passes through a zero"))
    }

    fn newton(&self, start: Complex64) -> Option<Complex64> {
        let mut s = start;
        for _ in 0..100 {
            let d = dispersion_continued(s, self.point, self.params);
            if d.derivative.norm() == 0.0 {
                return None;
            }
            let mut step = d.value / d.derivative;
            let cap = 0.5 * (1.0 + s.norm());
            if step.norm() > cap {
                step *= cap / step.norm();
            }
            s -= step;
            if !(s.re.is_finite() && s.im.is_finite()) {
                return None;
            }
            if step.norm() <= 1e-14 * (1.0 + s.norm()) {
                return Some(s);
            }
        }
        let d = dispersion_continued(s, self.point, self.params);
        (d.value.norm() <= 1e-9 * d.scale).then_some(s)
    }

    fn locate(&self, rect: Rect, count: usize, depth: u32, out: &mut Vec<Complex64>) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        let slack = 1e-9 * (1.0 + rect.diameter());
        let tiny = depth > 60 || rect.diameter() < 1e-9;
        if count == 1 || tiny {
            if let Some(root) = self.newton(rect.center()) {
                if rect.contains(root, slack) {
                    // count > 1 only survives to here as a multiple zero
                    out.extend(std::iter::repeat_n(root, count));
                    return Ok(());
                }
            }
            if tiny {
                return Err(Error::numerical("root isolation failed"));
            }
        }
        let wide = rect.re1 - rect.re0 >= rect.im1 - rect.im0;
        for shift in [0.5, 0.487, 0.523, 0.451, 0.559] {
            let (a, b) = if wide {
                let cut = rect.re0 + shift * (rect.re1 - rect.re0);
                (Rect { re1: cut, ..rect }, Rect { re0: cut, ..rect })
            } else {
                let cut = rect.im0 + shift * (rect.im1 - rect.im0);
                (Rect { im1: cut, ..rect }, Rect { im0: cut, ..rect })
            };
            let (Winding::Count(ca), Winding::Count(cb)) = (self.winding(&a)?, self.winding(&b)?) else {
                continue;
            };
            if ca + cb != count {
                continue;
            }
            self.locate(a, ca, depth + 1, out)?;
            self.locate(b, cb, depth + 1, out)?;
            return Ok(());
        }
        Err(Error::numerical("could not split the search rectangle"))
    }
}

fn default_extent(point: &PumpPoint, params: &SystemParams) -> (f64, f64) {
    // balance |s|^3 against the strongest coupling term of a cold beam
    let k = coupling_prefactor(params) * (point.a_asym.abs() + params.delta.abs() * point.s_total);
    let reach = 2.0 * k.cbrt() + 2.0 + params.delta.abs();
    (reach.max(10.0), reach.max(4.0 * params.u_t.max(1.0)))
}

/// Zeros of `D` with positive real part, with default search settings.
pub fn max_growth_rate(point: &PumpPoint, params: &SystemParams) -> Result<GrowthAnalysis> {
    max_growth_rate_with(point, params, &RootSearch::default())
}

pub fn max_growth_rate_with(
    point: &PumpPoint,
    params: &SystemParams,
    cfg: &RootSearch,
) -> Result<GrowthAnalysis> {
    PumpPoint::new(point.s_total, point.a_asym)?;
    let (re_auto, im_auto) = default_extent(point, params);
    let re_max = cfg.re_max.unwrap_or(re_auto);
    let im_max = cfg.im_max.unwrap_or(im_auto);
    let searcher = Searcher { point, params, cfg };
    let outer = Rect { re0: 0.0, re1: re_max, im0: -im_max, im1: im_max };
    let (outer, count) = searcher.count_robust(&outer, false)?;
    let mut roots = Vec::with_capacity(count);
    searcher.locate(outer, count, 0, &mut roots)?;
    roots.sort_by(|a, b| b.re.total_cmp(&a.re).then(a.im.total_cmp(&b.im)));
    Ok(GrowthAnalysis { zero_count: count, roots, re_max: outer.re1, im_max: outer.im1 })
}
