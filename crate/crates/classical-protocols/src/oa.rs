//! Binary orthogonal arrays of strength 2.

use crate::ClassicalError;

pub const DEFAULT_OA_CAP: usize = 8;

/// `N x k` array over `{0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryArray {
    pub rows: Vec<Vec<u8>>,
}

impl BinaryArray {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn from_strs(rows: &[&str]) -> Self {
        BinaryArray {
            rows: rows.iter().map(|r| r.bytes().map(|c| (c == b'1') as u8).collect()).collect(),
        }
    }
}

/// Strength-2 check: every column pair shows 00, 01, 10, 11 equally often.
/// With fewer than two columns the condition is vacuous.
pub fn is_orthogonal_array(arr: &BinaryArray) -> bool {
    let (n, k) = (arr.n_rows(), arr.n_cols());
    if arr.rows.iter().any(|r| r.len() != k) {
        return false;
    }
    if k < 2 {
        return true;
    }
    if n % 4 != 0 {
        return false;
    }
    for i in 0..k {
        for j in (i + 1)..k {
            let mut counts = [0usize; 4];
            for r in &arr.rows {
                counts[(r[i] * 2 + r[j]) as usize] += 1;
            }
            if counts.iter().any(|&c| c != n / 4) {
                return false;
            }
        }
    }
    true
}

fn columns_to_array(cols: &[u64], n: usize) -> BinaryArray {
    BinaryArray {
        rows: (0..n).map(|r| cols.iter().map(|c| (c >> r & 1) as u8).collect()).collect(),
    }
}

/// Some `OA(n, k, 2, 2)`, or `None` if none exists with `n` rows (`n <= 24`).
///
/// Columns are `n`-bit masks. Up to symmetry the first row is all zeros, the
/// first column is `0^{n/2} 1^{n/2}` and the remaining columns increase.
pub fn find_oa(n: usize, k: usize) -> Option<BinaryArray> {
    if k == 0 {
        return Some(BinaryArray { rows: vec![Vec::new(); n] });
    }
    if k == 1 {
        return (n >= 2 && n.is_multiple_of(2))
            .then(|| columns_to_array(&[((1u64 << (n / 2)) - 1) << (n / 2)], n));
    }
    if !n.is_multiple_of(4) || n == 0 || n > 24 {
        return None;
    }
    let first = ((1u64 << (n / 2)) - 1) << (n / 2);
    let cands: Vec<u64> = balanced_masks(n)
        .into_iter()
        .filter(|c| c & 1 == 0 && (c & first).count_ones() as usize == n / 4 && *c != first)
        .collect();
    let mut chosen = vec![first];
    extend(&cands, 0, k, n, &mut chosen).then(|| columns_to_array(&chosen, n))
}

fn extend(cands: &[u64], from: usize, k: usize, n: usize, chosen: &mut Vec<u64>) -> bool {
    if chosen.len() == k {
        return true;
    }
    for (i, &c) in cands.iter().enumerate().skip(from) {
        if chosen.iter().all(|&d| (c & d).count_ones() as usize == n / 4) {
            chosen.push(c);
            if extend(cands, i + 1, k, n, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

fn balanced_masks(n: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m: u64 = (1u64 << (n / 2)) - 1;
    let limit = 1u64 << n;
    while m < limit {
        out.push(m);
        let c = m & m.wrapping_neg();
        let r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
    }
    out
}

/// `T_k`: the least `N` admitting an `OA(N, k, 2, 2)`; `T_1 = 2` by convention.
pub fn min_oa_rows(k: usize) -> Result<usize, ClassicalError> {
    min_oa_rows_capped(k, DEFAULT_OA_CAP)
}

pub fn min_oa_rows_capped(k: usize, cap: usize) -> Result<usize, ClassicalError> {
    if k > cap {
        return Err(ClassicalError::CapExceeded(format!("OA search limited to k <= {cap}")));
    }
    if k == 0 {
        return Err(ClassicalError::InvalidParams("k must be positive".into()));
    }
    if k == 1 {
        return Ok(2);
    }
    (1..)
        .map(|i| 4 * i)
        .take_while(|&n| n <= 24)
        .find(|&n| find_oa(n, k).is_some())
        .ok_or_else(|| ClassicalError::SearchExhausted(format!("no OA with k = {k}")))
}
