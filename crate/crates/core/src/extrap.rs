//! Wynn's epsilon algorithm for accelerating partial sums.

/// Limit estimate of a sequence of partial sums, with an error estimate
/// taken from the spread of the best even column of the epsilon table.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Limit {
    pub value: f64,
    pub error: f64,
}

pub(crate) fn wynn_epsilon(sums: &[f64]) -> Limit {
    let n = sums.len();
    if n == 0 {
        return Limit { value: 0.0, error: f64::INFINITY };
    }
    let last = sums[n - 1];
    let mut best = Limit { value: last, error: if n > 1 { (last - sums[n - 2]).abs() } else { f64::INFINITY } };
    // Columns k-1 and k; column 0 is the sequence itself.
    let mut prev = vec![0.0; n + 1];
    let mut cur = sums.to_vec();
    let mut k = 0;
    while cur.len() >= 2 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            let scale = cur[i + 1].abs().max(cur[i].abs());
            if diff.abs() <= 4.0 * f64::EPSILON * scale {
                // Two equal entries: the column has converged here.
                if k % 2 == 0 {
                    let err = 4.0 * f64::EPSILON * scale;
                    if err < best.error {
                        best = Limit { value: cur[i + 1], error: err };
                    }
                }
                return best;
            }
            next.push(prev[i + 1] + 1.0 / diff);
        }
        prev = cur;
        cur = next;
        k += 1;
        if k % 2 == 0 && cur.len() >= 2 {
            let m = cur.len();
            let err = (cur[m - 1] - cur[m - 2]).abs();
            if err < best.error {
                best = Limit { value: cur[m - 1], error: err };
            }
        }
    }
    best
}
