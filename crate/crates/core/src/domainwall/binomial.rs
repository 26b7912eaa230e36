use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `C(n, k)` by the exact multiplicative recurrence; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc * (n - i) is always divisible by (i + 1) at this point.
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Pascal rows `0..=n_max`, for sums that touch many coefficients.
#[derive(Debug, Clone)]
pub(crate) struct BinomialTable {
    rows: Vec<Vec<BigUint>>,
    zero: BigUint,
}

impl BinomialTable {
    pub(crate) fn new(n_max: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
        rows.push(vec![BigUint::one()]);
        for n in 1..=n_max {
            let prev = &rows[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(BigUint::one());
            for k in 1..n {
                row.push(&prev[k - 1] + &prev[k]);
            }
            row.push(BigUint::one());
            rows.push(row);
        }
        BinomialTable { rows, zero: BigUint::zero() }
    }

    pub(crate) fn get(&self, n: i64, k: i64) -> &BigUint {
        if n < 0 || k < 0 || k > n {
            return &self.zero;
        }
        match self.rows.get(n as usize) {
            Some(row) => &row[k as usize],
            None => panic!("binomial table too small: n = {n}, n_max = {}", self.rows.len() - 1),
        }
    }
}

/// Natural log of a big integer without overflowing `f64`.
pub(crate) fn ln_big(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 1000 {
        let v: f64 = num_traits::ToPrimitive::to_f64(n).unwrap_or(f64::INFINITY);
        return v.ln();
    }
    let shift = bits - 64;
    let top: BigUint = n >> shift;
    let top = num_traits::ToPrimitive::to_f64(&top).unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}
