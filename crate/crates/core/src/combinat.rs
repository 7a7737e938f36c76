//! Middle binomials, Catalan numbers and the semi-Catalan / semi-binomial
//! triangles.
//!
//! All functions are exact. Binomial coefficients vanish outside `0 ≤ k ≤ n`,
//! with the single exception `C(-1, 0) = 1`, which the inverse formulas for
//! the binomial Hankel factors rely on at the origin.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{big, rat};
use crate::Rational;

/// Binomial coefficient with the boundary conventions described above.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n == -1 && k == 0 {
        return BigInt::one();
    }
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `b_j = C(2j, j)`.
pub fn middle_binomial(j: i64) -> Rational {
    big(binomial(2 * j, j))
}

/// `c_j = C(2j, j) - C(2j, j+1)`.
pub fn catalan(j: i64) -> Rational {
    big(binomial(2 * j, j) - binomial(2 * j, j + 1))
}

/// `c_{n,k} = C(2n, n+k) - C(2n, n+k+1)`, zero outside `0 ≤ k ≤ n`.
pub fn semi_catalan(n: i64, k: i64) -> Rational {
    if k < 0 || k > n {
        return Rational::zero();
    }
    big(binomial(2 * n, n + k) - binomial(2 * n, n + k + 1))
}

/// `c'_{n,k} = (k+1)/(n+1) · C(2n+2, n-k)`.
pub fn shifted_semi_catalan(n: i64, k: i64) -> Rational {
    if k < 0 || k > n {
        return Rational::zero();
    }
    rat(k + 1, n + 1) * big(binomial(2 * n + 2, n - k))
}

/// `b_{n,k} = Σ_{i=k}^{n} c_{n,i}`.
pub fn semi_binomial(n: i64, k: i64) -> Rational {
    if k > n || n < 0 {
        return Rational::zero();
    }
    (k.max(0)..=n).map(|i| semi_catalan(n, i)).sum()
}

/// `b'_{j,k} = b_{j,k} + b_{j,k+1}`, the entries of the factor `R'` with
/// `B' = R'·diag(2,…,2)·R'ᵀ`.
///
/// The column `k = 0` follows the same rule. Halving `b_{j,1}` there breaks
/// the factorization already at `n = 2`, where `B'(2) = [[2,6],[6,20]]` forces
/// `b'_{1,0} = 3`.
pub fn shifted_semi_binomial(j: i64, k: i64) -> Rational {
    if k < 0 || k > j {
        return Rational::zero();
    }
    semi_binomial(j, k) + semi_binomial(j, k + 1)
}

/// The six sequence families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SequenceKind {
    MiddleBinomial,
    Catalan,
    SemiCatalan,
    ShiftedSemiCatalan,
    SemiBinomial,
    ShiftedSemiBinomial,
}

impl SequenceKind {
    pub const ALL: [SequenceKind; 6] = [
        SequenceKind::MiddleBinomial,
        SequenceKind::Catalan,
        SequenceKind::SemiCatalan,
        SequenceKind::ShiftedSemiCatalan,
        SequenceKind::SemiBinomial,
        SequenceKind::ShiftedSemiBinomial,
    ];

    /// True for the two-index (triangle) families.
    pub fn is_triangle(self) -> bool {
        !matches!(self, SequenceKind::MiddleBinomial | SequenceKind::Catalan)
    }

    /// Evaluates the family; `k` is ignored for the one-index sequences.
    pub fn value(self, n: i64, k: i64) -> Rational {
        match self {
            SequenceKind::MiddleBinomial => middle_binomial(n),
            SequenceKind::Catalan => catalan(n),
            SequenceKind::SemiCatalan => semi_catalan(n, k),
            SequenceKind::ShiftedSemiCatalan => shifted_semi_catalan(n, k),
            SequenceKind::SemiBinomial => semi_binomial(n, k),
            SequenceKind::ShiftedSemiBinomial => shifted_semi_binomial(n, k),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SequenceKind::MiddleBinomial => "middle-binomial",
            SequenceKind::Catalan => "catalan",
            SequenceKind::SemiCatalan => "semi-catalan",
            SequenceKind::ShiftedSemiCatalan => "shifted-semi-catalan",
            SequenceKind::SemiBinomial => "semi-binomial",
            SequenceKind::ShiftedSemiBinomial => "shifted-semi-binomial",
        }
    }
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SequenceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SequenceKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown sequence kind {s:?}")))
    }
}

/// Memoized view of one family. Safe to share between threads.
#[derive(Debug)]
pub struct SequenceTable {
    kind: SequenceKind,
    memo: RwLock<HashMap<(i64, i64), Rational>>,
}

impl SequenceTable {
    pub fn new(kind: SequenceKind) -> Self {
        SequenceTable { kind, memo: RwLock::new(HashMap::new()) }
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn get(&self, n: i64, k: i64) -> Rational {
        let key = if self.kind.is_triangle() { (n, k) } else { (n, 0) };
        if let Some(v) = self.memo.read().expect("memo lock poisoned").get(&key) {
            return v.clone();
        }
        let v = self.kind.value(key.0, key.1);
        self.memo.write().expect("memo lock poisoned").insert(key, v.clone());
        v
    }

    /// Rows `0..=n`; triangle families give row `i` with `i+1` entries,
    /// one-index families give a single column.
    pub fn triangle(&self, n: i64) -> Vec<Vec<Rational>> {
        (0..=n)
            .map(
                |i| {
                    if self.kind.is_triangle() {
                        (0..=i).map(|k| self.get(i, k)).collect()
                    } else {
                        vec![self.get(i, 0)]
                    }
                },
            )
            .collect()
    }
}

/// The identities checked by [`check_semicatalan_identities`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Identity {
    /// `Σ_k (-1)^k c_{n,k} = 0` for `n ≥ 1`.
    AlternatingSum,
    /// `Σ_k c_{n,k} = b_n`.
    RowSum,
    /// `b_{k,0}/2 + Σ_{j≥1} (-1)^j b_{k,j} = 0` for `k ≥ 1`.
    HalfAlternating,
    /// `b_{n,k} = c_{n,k} + b_{n,k+1}`.
    Recursion,
}

#[derive(Clone, Debug, Default)]
pub struct IdentityReport {
    pub checked: usize,
    pub failures: Vec<(Identity, i64)>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn check_semicatalan_identities(n_max: i64) -> Result<IdentityReport> {
    if n_max < 1 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    let mut report = IdentityReport::default();
    let mut check = |id: Identity, n: i64, ok: bool| {
        report.checked += 1;
        if !ok {
            report.failures.push((id, n));
        }
    };
    for n in 0..=n_max {
        let alt: Rational = (0..=n).map(|k| if k % 2 == 0 { semi_catalan(n, k) } else { -semi_catalan(n, k) }).sum();
        if n >= 1 {
            check(Identity::AlternatingSum, n, alt.is_zero());
        }
        let row: Rational = (0..=n).map(|k| semi_catalan(n, k)).sum();
        check(Identity::RowSum, n, row == middle_binomial(n));
        if n >= 1 {
            let mut s = semi_binomial(n, 0) * rat(1, 2);
            for j in 1..=n {
                let b = semi_binomial(n, j);
                s = if j % 2 == 0 { s + b } else { s - b };
            }
            check(Identity::HalfAlternating, n, s.is_zero());
        }
        let rec = (0..=n).all(|k| semi_binomial(n, k) == semi_catalan(n, k) + semi_binomial(n, k + 1));
        check(Identity::Recursion, n, rec);
    }
    Ok(report)
}
