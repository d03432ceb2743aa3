//! Bounded-memory quasi-Newton minimizer with a strong-Wolfe line search
//! and box constraints.
//!
//! The inverse Hessian is approximated by the standard two-loop recursion
//! over a short (s, y) history; steps are capped so iterates stay inside the
//! box, and directions are projected at active bounds. Line search follows
//! Nocedal & Wright's bracket-and-zoom scheme with sufficient-decrease
//! c1 = 1e-4 and curvature c2 = 0.9.

use std::collections::VecDeque;

#[derive(Debug, Clone, Copy)]
pub struct LbfgsOptions {
    pub max_iters: usize,
    /// Stop when the infinity norm of the projected gradient drops below.
    pub grad_tol: f64,
    /// Stop on relative objective change below.
    pub f_tol: f64,
    pub history: usize,
    pub lower: f64,
    pub upper: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Default for LbfgsOptions {
    fn default() -> Self {
        Self {
            max_iters: 2000,
            grad_tol: 1e-9,
            f_tol: 1e-12,
            history: 10,
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
            c1: 1e-4,
            c2: 0.9,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LbfgsOutcome {
    pub x: Vec<f64>,
    pub f: f64,
    /// Accepted quasi-Newton steps.
    pub iters: usize,
    pub converged: bool,
    /// Objective after each accepted step, starting with the initial value.
    pub trace: Vec<f64>,
}

/// Error carrying the point where the objective turned non-finite.
#[derive(Debug, Clone)]
pub struct NonFiniteObjective {
    pub at_iter: usize,
}

struct Pair {
    s: Vec<f64>,
    y: Vec<f64>,
    rho: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn clamp_into(x: &mut [f64], lo: f64, hi: f64) {
    for v in x.iter_mut() {
        *v = v.clamp(lo, hi);
    }
}

/// Two-loop recursion: returns d = -H g, scaled by gamma = s.y / y.y.
fn two_loop(g: &[f64], pairs: &VecDeque<Pair>) -> Vec<f64> {
    let mut q = g.to_vec();
    let mut alphas = vec![0.0; pairs.len()];
    for (idx, pair) in pairs.iter().enumerate().rev() {
        let a = pair.rho * dot(&pair.s, &q);
        alphas[idx] = a;
        for (qi, yi) in q.iter_mut().zip(&pair.y) {
            *qi -= a * yi;
        }
    }
    if let Some(last) = pairs.back() {
        let gamma = dot(&last.s, &last.y) / dot(&last.y, &last.y);
        for qi in q.iter_mut() {
            *qi *= gamma;
        }
    }
    for (idx, pair) in pairs.iter().enumerate() {
        let b = pair.rho * dot(&pair.y, &q);
        for (qi, si) in q.iter_mut().zip(&pair.s) {
            *qi += (alphas[idx] - b) * si;
        }
    }
    for qi in q.iter_mut() {
        *qi = -*qi;
    }
    q
}

fn projected_grad_inf_norm(x: &[f64], g: &[f64], lo: f64, hi: f64) -> f64 {
    let eps = 1e-12;
    x.iter()
        .zip(g)
        .map(|(&xi, &gi)| {
            if xi <= lo + eps {
                gi.min(0.0).abs()
            } else if xi >= hi - eps {
                gi.max(0.0).abs()
            } else {
                gi.abs()
            }
        })
        .fold(0.0, f64::max)
}

/// At active bounds, zero the direction components that point outside.
fn project_direction(x: &[f64], d: &mut [f64], lo: f64, hi: f64) {
    let eps = 1e-12;
    for (xi, di) in x.iter().zip(d.iter_mut()) {
        if (*xi <= lo + eps && *di < 0.0) || (*xi >= hi - eps && *di > 0.0) {
            *di = 0.0;
        }
    }
}

/// Largest step along d that keeps x inside [lo, hi].
fn max_feasible_step(x: &[f64], d: &[f64], lo: f64, hi: f64) -> f64 {
    let mut a_max = f64::INFINITY;
    for (&xi, &di) in x.iter().zip(d) {
        if di > 0.0 {
            a_max = a_max.min((hi - xi) / di);
        } else if di < 0.0 {
            a_max = a_max.min((lo - xi) / di);
        }
    }
    a_max.max(0.0)
}

struct LineEval {
    alpha: f64,
    f: f64,
    dphi: f64,
    g: Vec<f64>,
}

/// Minimize a smooth objective inside a box. `eval` writes the gradient and
/// returns the objective.
pub fn minimize_boxed<F>(
    mut eval: F,
    x0: &[f64],
    opts: &LbfgsOptions,
) -> Result<LbfgsOutcome, NonFiniteObjective>
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    clamp_into(&mut x, opts.lower, opts.upper);
    let mut g = vec![0.0; n];
    let mut f = eval(&x, &mut g);
    if !f.is_finite() || g.iter().any(|v| !v.is_finite()) {
        return Err(NonFiniteObjective { at_iter: 0 });
    }
    let mut trace = vec![f];
    let mut pairs: VecDeque<Pair> = VecDeque::with_capacity(opts.history);
    let mut iters = 0;
    let mut converged = false;

    let mut scratch_x = vec![0.0; n];
    let mut scratch_g = vec![0.0; n];

    'outer: for iter in 1..=opts.max_iters {
        if projected_grad_inf_norm(&x, &g, opts.lower, opts.upper) <= opts.grad_tol {
            converged = true;
            break;
        }

        let mut d = two_loop(&g, &pairs);
        project_direction(&x, &mut d, opts.lower, opts.upper);
        let mut dphi0 = dot(&d, &g);
        if dphi0 >= 0.0 {
            // Not a descent direction; fall back to projected steepest descent.
            pairs.clear();
            d = g.iter().map(|v| -v).collect();
            project_direction(&x, &mut d, opts.lower, opts.upper);
            dphi0 = dot(&d, &g);
            if dphi0 >= -f64::EPSILON {
                converged = true; // KKT point of the box
                break;
            }
        }

        let a_max = max_feasible_step(&x, &d, opts.lower, opts.upper);
        if a_max <= 0.0 {
            converged = true;
            break;
        }

        let mut probe = |alpha: f64, xs: &mut [f64], gs: &mut [f64]| -> LineEval {
            for ((xi, di), out) in x.iter().zip(&d).zip(xs.iter_mut()) {
                *out = (xi + alpha * di).clamp(opts.lower, opts.upper);
            }
            let fv = eval(xs, gs);
            LineEval {
                alpha,
                f: fv,
                dphi: dot(gs, &d),
                g: gs.to_vec(),
            }
        };

        // Strong Wolfe bracketing.
        let f0 = f;
        let mut accepted: Option<LineEval> = None;
        let mut lo = LineEval {
            alpha: 0.0,
            f: f0,
            dphi: dphi0,
            g: Vec::new(),
        };
        let mut hi: Option<LineEval> = None;
        let mut alpha = 1.0f64.min(a_max);
        let mut prev = LineEval {
            alpha: 0.0,
            f: f0,
            dphi: dphi0,
            g: Vec::new(),
        };
        for attempt in 0..20 {
            let cand = probe(alpha, &mut scratch_x, &mut scratch_g);
            if !cand.f.is_finite() {
                return Err(NonFiniteObjective { at_iter: iter });
            }
            if cand.f > f0 + opts.c1 * cand.alpha * dphi0 || (attempt > 0 && cand.f >= prev.f) {
                lo = prev;
                hi = Some(cand);
                break;
            }
            if cand.dphi.abs() <= -opts.c2 * dphi0 {
                accepted = Some(cand);
                break;
            }
            if cand.dphi >= 0.0 {
                hi = Some(prev);
                lo = cand;
                break;
            }
            if alpha >= a_max {
                // Boundary hit while still descending: take the boundary point.
                accepted = Some(cand);
                break;
            }
            prev = cand;
            alpha = (2.0 * alpha).min(a_max);
        }

        if accepted.is_none() {
            if let Some(mut high) = hi {
                // Zoom phase: shrink [lo, hi] keeping the Armijo point in lo.
                for _ in 0..30 {
                    let span = high.alpha - lo.alpha;
                    if span.abs() < 1e-16 * (1.0 + lo.alpha.abs()) {
                        break;
                    }
                    let mid = lo.alpha + 0.5 * span;
                    let cand = probe(mid, &mut scratch_x, &mut scratch_g);
                    if !cand.f.is_finite() {
                        return Err(NonFiniteObjective { at_iter: iter });
                    }
                    if cand.f > f0 + opts.c1 * cand.alpha * dphi0 || cand.f >= lo.f {
                        high = cand;
                    } else {
                        if cand.dphi.abs() <= -opts.c2 * dphi0 {
                            accepted = Some(cand);
                            break;
                        }
                        if cand.dphi * span >= 0.0 {
                            high = LineEval {
                                alpha: lo.alpha,
                                f: lo.f,
                                dphi: lo.dphi,
                                g: std::mem::take(&mut lo.g),
                            };
                        }
                        lo = cand;
                    }
                }
                // Fall back to the best Armijo point seen inside the zoom.
                if accepted.is_none() && lo.alpha > 0.0 && !lo.g.is_empty() {
                    accepted = Some(lo);
                }
            }
        }

        let step = match accepted {
            Some(s) if s.alpha > 0.0 => s,
            _ => {
                // Line search failed: restart the Hessian model once, then give up.
                if pairs.is_empty() {
                    break 'outer;
                }
                pairs.clear();
                continue;
            }
        };

        let mut x_new = vec![0.0; n];
        for ((xi, di), out) in x.iter().zip(&d).zip(x_new.iter_mut()) {
            *out = (xi + step.alpha * di).clamp(opts.lower, opts.upper);
        }
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = step.g.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-10 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if pairs.len() == opts.history {
                pairs.pop_front();
            }
            pairs.push_back(Pair {
                s,
                y,
                rho: 1.0 / sy,
            });
        }

        let f_prev = f;
        x = x_new;
        f = step.f;
        g = step.g;
        iters = iter;
        trace.push(f);

        if (f_prev - f).abs() <= opts.f_tol * f.abs().max(1.0) {
            converged = true;
            break;
        }
    }

    Ok(LbfgsOutcome {
        x,
        f,
        iters,
        converged,
        trace,
    })
}
