use rayon::prelude::*;

/// Genes per reduction block. Block sums are formed sequentially and then
/// added in block order, so totals do not depend on the thread count.
pub(crate) const BLOCK: usize = 1024;

pub(crate) fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || max.is_nan() {
        return max;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    max + terms.iter().map(|&t| (t - max).exp()).sum::<f64>().ln()
}

/// Sum `f(i)` for `i in 0..len`, componentwise, in a fixed blocked order.
pub(crate) fn blocked_sum<const N: usize, F>(len: usize, f: F) -> [f64; N]
where
    F: Fn(usize) -> [f64; N] + Sync,
{
    let partials: Vec<[f64; N]> = (0..len.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut acc = [0.0; N];
            for i in b * BLOCK..((b + 1) * BLOCK).min(len) {
                let v = f(i);
                for k in 0..N {
                    acc[k] += v[k];
                }
            }
            acc
        })
        .collect();
    let mut total = [0.0; N];
    for p in partials {
        for k in 0..N {
            total[k] += p[k];
        }
    }
    total
}
