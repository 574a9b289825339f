//! Two-dimensional Nelder-Mead simplex minimization.
//!
//! Only the two-parameter case is needed (the shape pair of the generalized
//! lambda fit), so the simplex is kept in fixed-size arrays.

use super::abs;

/// Result of one simplex run.
#[derive(Debug, Clone, Copy)]
pub struct Minimum {
    pub x: [f64; 2],
    pub value: f64,
    pub iterations: usize,
}

/// Minimize `f` over two variables starting from `start` with the given
/// initial simplex step. Standard reflection/expansion/contraction/shrink
/// coefficients (1, 2, 0.5, 0.5).
pub fn minimize<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    start: [f64; 2],
    step: f64,
    max_iter: usize,
    f_tol: f64,
) -> Minimum {
    let mut pts = [
        start,
        [start[0] + step, start[1]],
        [start[0], start[1] + step],
    ];
    let mut vals = [
        f(pts[0][0], pts[0][1]),
        f(pts[1][0], pts[1][1]),
        f(pts[2][0], pts[2][1]),
    ];

    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        // Order: pts[0] best, pts[2] worst.
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap_or(core::cmp::Ordering::Equal));
        let (best, mid, worst) = (order[0], order[1], order[2]);

        let spread = abs(vals[worst] - vals[best]);
        let size = abs(pts[worst][0] - pts[best][0])
            + abs(pts[worst][1] - pts[best][1])
            + abs(pts[mid][0] - pts[best][0])
            + abs(pts[mid][1] - pts[best][1]);
        if spread <= f_tol * (1.0 + abs(vals[best])) && size <= 1e-12 * (1.0 + abs(pts[best][0]) + abs(pts[best][1])) {
            break;
        }

        let centroid = [
            0.5 * (pts[best][0] + pts[mid][0]),
            0.5 * (pts[best][1] + pts[mid][1]),
        ];
        let reflect = [
            centroid[0] + (centroid[0] - pts[worst][0]),
            centroid[1] + (centroid[1] - pts[worst][1]),
        ];
        let f_reflect = f(reflect[0], reflect[1]);

        if f_reflect < vals[best] {
            let expand = [
                centroid[0] + 2.0 * (centroid[0] - pts[worst][0]),
                centroid[1] + 2.0 * (centroid[1] - pts[worst][1]),
            ];
            let f_expand = f(expand[0], expand[1]);
            if f_expand < f_reflect {
                pts[worst] = expand;
                vals[worst] = f_expand;
            } else {
                pts[worst] = reflect;
                vals[worst] = f_reflect;
            }
        } else if f_reflect < vals[mid] {
            pts[worst] = reflect;
            vals[worst] = f_reflect;
        } else {
            let contract_point;
            let f_contract;
            if f_reflect < vals[worst] {
                // Outside contraction.
                contract_point = [
                    centroid[0] + 0.5 * (reflect[0] - centroid[0]),
                    centroid[1] + 0.5 * (reflect[1] - centroid[1]),
                ];
                f_contract = f(contract_point[0], contract_point[1]);
                if f_contract <= f_reflect {
                    pts[worst] = contract_point;
                    vals[worst] = f_contract;
                    continue;
                }
            } else {
                // Inside contraction.
                contract_point = [
                    centroid[0] + 0.5 * (pts[worst][0] - centroid[0]),
                    centroid[1] + 0.5 * (pts[worst][1] - centroid[1]),
                ];
                f_contract = f(contract_point[0], contract_point[1]);
                if f_contract < vals[worst] {
                    pts[worst] = contract_point;
                    vals[worst] = f_contract;
                    continue;
                }
            }
            // Shrink toward the best point.
            for i in 0..3 {
                if i == best {
                    continue;
                }
                pts[i] = [
                    pts[best][0] + 0.5 * (pts[i][0] - pts[best][0]),
                    pts[best][1] + 0.5 * (pts[i][1] - pts[best][1]),
                ];
                vals[i] = f(pts[i][0], pts[i][1]);
            }
        }
    }

    let mut best = 0;
    for i in 1..3 {
        if vals[i] < vals[best] {
            best = i;
        }
    }
    Minimum {
        x: pts[best],
        value: vals[best],
        iterations,
    }
}

/// Minimize with a restart at the found optimum using a smaller step; helps
/// the simplex settle tightly on smooth objectives.
pub fn minimize_restarted<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    start: [f64; 2],
    step: f64,
    max_iter: usize,
) -> Minimum {
    let first = minimize(&mut f, start, step, max_iter, 1e-14);
    let second = minimize(&mut f, first.x, step * 0.05, max_iter, 1e-16);
    if second.value <= first.value {
        Minimum {
            iterations: first.iterations + second.iterations,
            ..second
        }
    } else {
        first
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let m = minimize_restarted(
            |x, y| (1.0 - x).powi(2) + 100.0 * (y - x * x).powi(2),
            [-1.2, 1.0],
            0.5,
            2000,
        );
        assert!((m.x[0] - 1.0).abs() < 1e-5, "{:?}", m);
        assert!((m.x[1] - 1.0).abs() < 1e-5, "{:?}", m);
    }

    #[test]
    fn quadratic_bowl_tightly() {
        let m = minimize_restarted(|x, y| (x - 0.2).powi(2) + 3.0 * (y + 0.4).powi(2), [1.0, 1.0], 0.3, 500);
        assert!(m.value < 1e-18);
        assert!((m.x[0] - 0.2).abs() < 1e-8);
        assert!((m.x[1] + 0.4).abs() < 1e-8);
    }
}
