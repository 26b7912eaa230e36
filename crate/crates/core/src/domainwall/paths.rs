use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::binomial::{binomial, BinomialTable};
use super::PathCount;
use crate::{Error, Result};

pub(crate) fn check_even(ell: u64) -> Result<u64> {
    if !ell.is_multiple_of(2) {
        return Err(Error::arg(format!("interval length must be even, got {ell}")));
    }
    Ok(ell / 2)
}

/// Reflection formula for `N(x,y;l)` with binomials drawn from `binom`.
fn merge_count<'a, F>(x: i64, y: i64, half: i64, binom: F) -> BigUint
where
    F: Fn(i64, i64) -> std::borrow::Cow<'a, BigUint>,
{
    if half == 0 {
        return if x == 0 && y == 0 { BigUint::one() } else { BigUint::zero() };
    }
    if x < half || y < half {
        return BigUint::zero();
    }
    let n = x + y - half - 1;
    let pos = BigInt::from(binom(n, y - 1).into_owned() * binom(n, x - 1).as_ref());
    let neg = BigInt::from(binom(n, y).into_owned() * binom(n, x).as_ref());
    let diff = pos - neg;
    diff.to_biguint().expect("reflection count is nonnegative")
}

/// Number of pairs of up/right walks from `(l/2, 0)` and `(0, l/2)` that first
/// meet at `(x, y)`.
pub fn n_merge(x: u64, y: u64, ell: u64) -> Result<PathCount> {
    let half = check_even(ell)? as i64;
    let c = merge_count(x as i64, y as i64, half, |n, k| std::borrow::Cow::Owned(binomial(n, k)));
    Ok(PathCount(c))
}

pub(crate) fn n_merge_with(table: &BinomialTable, x: i64, y: i64, half: i64) -> BigUint {
    merge_count(x, y, half, |n, k| std::borrow::Cow::Borrowed(table.get(n, k)))
}

/// `N(z;l) = sum_{x+y=z} N(x,y;l)`: merged configurations whose merge point lies
/// on the anti-diagonal `x + y = z`.
pub fn n_z(z: u64, ell: u64) -> Result<PathCount> {
    let half = check_even(ell)?;
    let table = BinomialTable::new(z as usize);
    Ok(PathCount(n_z_with(&table, z as i64, half as i64)))
}

pub(crate) fn n_z_with(table: &BinomialTable, z: i64, half: i64) -> BigUint {
    if half == 0 {
        return if z == 0 { BigUint::one() } else { BigUint::zero() };
    }
    (half..=z - half).map(|x| n_merge_with(table, x, z - x, half)).sum()
}

/// `N(z;l)` for every `z` in `0..=z_max`.
pub(crate) fn n_z_series(z_max: u64, ell: u64) -> Result<Vec<BigUint>> {
    let half = check_even(ell)? as i64;
    let table = BinomialTable::new(z_max as usize);
    Ok((0..=z_max as i64).map(|z| n_z_with(&table, z, half)).collect())
}

/// Counts of unmerged (or just-merged) walker pairs after `t` synchronized
/// steps, indexed by half the l1 separation of the two endpoints.
///
/// The walkers start `l/2` apart along the anti-diagonal. Per step the
/// separation changes by +1 (first walker right, second up), -1 (first up,
/// second right) or 0 (both the same way, two ways). Pairs that coincide
/// before the last step have merged and are dropped; coincidence on the last
/// step survives with separation zero.
pub fn separation_counts(t: u64, ell: u64) -> Result<Vec<PathCount>> {
    let half = check_even(ell)? as usize;
    if half == 0 {
        return Err(Error::arg("separation counts need l >= 2"));
    }
    let width = half + t as usize + 1;
    let mut cur = vec![BigUint::zero(); width];
    cur[half] = BigUint::one();
    for step in 1..=t {
        let mut next = vec![BigUint::zero(); width];
        for (h, c) in cur.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            next[h] += c * 2u32;
            next[h + 1] += c;
            if h > 0 {
                next[h - 1] += c;
            }
        }
        if step < t {
            next[0] = BigUint::zero();
        }
        cur = next;
    }
    Ok(cur.into_iter().map(PathCount).collect())
}

/// `J(r;T;l)`: configurations in the depth-`T` restriction whose two endpoints
/// are `r` apart in l1 distance.
pub fn j_paths_sep(r: u64, t: u64, ell: u64) -> Result<PathCount> {
    if !r.is_multiple_of(2) {
        return Err(Error::arg(format!("separation must be even, got {r}")));
    }
    let counts = separation_counts(t, ell)?;
    Ok(counts.into_iter().nth((r / 2) as usize).unwrap_or_default())
}

/// `J(T;l) = sum_r J(r;T;l)`.
pub fn j_paths(t: u64, ell: u64) -> Result<PathCount> {
    let counts = separation_counts(t, ell)?;
    Ok(PathCount(counts.into_iter().map(|c| c.0).sum()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pc(v: u64) -> PathCount {
        PathCount(BigUint::from(v))
    }

    #[test]
    fn merge_examples() {
        assert_eq!(n_merge(2, 2, 4).unwrap(), pc(1));
        assert_eq!(n_merge(1, 0, 2).unwrap(), pc(0));
        assert_eq!(n_merge(2, 2, 2).unwrap(), pc(3));
        assert_eq!(n_merge(0, 0, 0).unwrap(), pc(1));
        assert_eq!(n_merge(1, 0, 0).unwrap(), pc(0));
        assert!(n_merge(1, 1, 3).is_err());
    }

    #[test]
    fn diagonal_examples() {
        assert_eq!(n_z(1, 2).unwrap(), pc(0));
        for ell in [2u64, 4, 6, 8, 10] {
            assert_eq!(n_z(ell, ell).unwrap(), pc(1));
            for z in 0..ell / 2 {
                assert_eq!(n_z(z, ell).unwrap(), pc(0));
            }
        }
    }

    #[test]
    fn short_times_are_free() {
        for ell in [2u64, 4, 6, 8] {
            for t in 0..ell / 2 {
                assert_eq!(j_paths(t, ell).unwrap(), pc(4u64.pow(t as u32)));
            }
        }
        assert_eq!(j_paths(1, 2).unwrap(), pc(4));
        assert_eq!(j_paths_sep(0, 1, 2).unwrap(), pc(1));
        assert_eq!(j_paths_sep(2, 1, 2).unwrap(), pc(2));
        assert_eq!(j_paths_sep(4, 1, 2).unwrap(), pc(1));
        assert_eq!(j_paths_sep(40, 1, 2).unwrap(), pc(0));
        assert!(j_paths_sep(3, 1, 2).is_err());
    }

    #[test]
    fn return_to_start_separation() {
        for ell in [2i64, 4, 6] {
            for t in 0..=8i64 {
                let expected = BigInt::from(binomial(2 * t, t)) - BigInt::from(binomial(2 * t, t + ell));
                let got = j_paths_sep(ell as u64, t as u64, ell as u64).unwrap();
                assert_eq!(BigInt::from(got.0), expected, "T={t} l={ell}");
            }
        }
    }
}
