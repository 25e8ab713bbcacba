//! q-values from posterior probabilities of equivalence.
//!
//! Calling every gene with `p_i >= t` equivalent, the expected number of false
//! calls is `sum_{p_i >= t} (1 - p_i)`, so the estimated false discovery rate
//! at cutoff `t` is the mean of `1 - p_i` over the discovery set.

use serde::Serialize;

use crate::error::{Error, Result};

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{p} is not a probability")))
    }
}

/// `q(t) = sum_{i: p_i >= t} (1 - p_i) / #{i: p_i >= t}`.
pub fn q_value_at(t: f64, ps: &[f64]) -> Result<f64> {
    for &p in ps {
        check_probability(p)?;
    }
    let mut hits: Vec<f64> = ps.iter().copied().filter(|&p| p >= t).collect();
    if hits.is_empty() {
        return Err(Error::EmptyDiscoverySet { threshold: t });
    }
    // same summation order as `build_table`
    hits.sort_by(|a, b| b.total_cmp(a));
    let total: f64 = hits.iter().fold(0.0, |acc, p| acc + (1.0 - p));
    Ok(total / hits.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QValueRow {
    pub gene_id: String,
    pub p_equiv: f64,
    pub q_value: f64,
}

/// Genes sorted by decreasing posterior probability (ties by id), each with
/// the q-value of the cutoff at its own probability.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QValueTable {
    rows: Vec<QValueRow>,
}

impl QValueTable {
    pub fn rows(&self) -> &[QValueRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn max_q_value(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.q_value)
    }
}

pub fn build_table(scored: Vec<(String, f64)>) -> Result<QValueTable> {
    if scored.is_empty() {
        return Err(Error::InvalidParameter("no scored genes".into()));
    }
    for (_, p) in &scored {
        check_probability(*p)?;
    }
    let mut scored = scored;
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    let n = scored.len();
    let mut q = vec![0.0; n];
    let mut acc = 0.0;
    let mut start = 0;
    while start < n {
        let p = scored[start].1;
        let mut end = start;
        while end < n && scored[end].1 == p {
            acc += 1.0 - scored[end].1;
            end += 1;
        }
        let shared = acc / end as f64;
        q[start..end].fill(shared);
        start = end;
    }
    // the exact values are nondecreasing; keep rounding from breaking that
    for k in 1..n {
        if q[k] < q[k - 1] {
            q[k] = q[k - 1];
        }
    }

    let rows = scored
        .into_iter()
        .zip(q)
        .map(|((gene_id, p_equiv), q_value)| QValueRow {
            gene_id,
            p_equiv,
            q_value,
        })
        .collect();
    Ok(QValueTable { rows })
}
