//! Total positivity tests.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::{ExactMatrix, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PositivityMode {
    /// Every minor, all index sets.
    AllMinors,
    /// Leading principal minors of a Hankel matrix and of its lower-left
    /// `(n-1)×(n-1)` block. Only decides strict positivity.
    PinkusHankel,
}

/// A minor, given by its row and column index sets.
#[derive(Clone, Debug, PartialEq)]
pub struct MinorWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PositivityVerdict {
    pub mode: PositivityMode,
    pub totally_positive: bool,
    /// `None` when the mode cannot decide it.
    pub totally_nonnegative: Option<bool>,
    pub minors_checked: usize,
    /// First non-positive minor met, if any.
    pub witness: Option<MinorWitness>,
}

/// All strictly increasing `k`-subsets of `0..n`, in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

pub fn total_positivity(m: &ExactMatrix, mode: PositivityMode) -> Result<PositivityVerdict> {
    if !m.is_square() {
        return Err(Error::Dimension("total positivity needs a square matrix".into()));
    }
    match mode {
        PositivityMode::AllMinors => all_minors(m),
        PositivityMode::PinkusHankel => pinkus(m),
    }
}

fn all_minors(m: &ExactMatrix) -> Result<PositivityVerdict> {
    let n = m.rows();
    let mut checked = 0;
    let mut tp = true;
    let mut tnn = true;
    let mut witness = None;
    for k in 1..=n {
        let sets = subsets(n, k);
        for r in &sets {
            for c in &sets {
                let v = m.minor(r, c)?;
                checked += 1;
                if !v.is_positive() {
                    tp = false;
                    if v.is_negative() {
                        tnn = false;
                    }
                    if witness.is_none() || v.is_negative() && tnn_witness_is_zero(&witness) {
                        witness = Some(MinorWitness { rows: r.clone(), cols: c.clone(), value: v });
                    }
                }
            }
        }
    }
    Ok(PositivityVerdict {
        mode: PositivityMode::AllMinors,
        totally_positive: tp,
        totally_nonnegative: Some(tnn),
        minors_checked: checked,
        witness,
    })
}

// Prefer reporting a negative minor over a zero one.
fn tnn_witness_is_zero(w: &Option<MinorWitness>) -> bool {
    w.as_ref().is_some_and(|w| w.value.is_zero())
}

fn pinkus(m: &ExactMatrix) -> Result<PositivityVerdict> {
    if !m.is_hankel() {
        return Err(Error::Structure("Pinkus criterion needs a Hankel matrix".into()));
    }
    let n = m.rows();
    let mut checked = 0;
    let mut witness = None;
    let mut check = |rows: Vec<usize>, cols: Vec<usize>| -> Result<()> {
        let v = m.minor(&rows, &cols)?;
        checked += 1;
        if !v.is_positive() && witness.is_none() {
            witness = Some(MinorWitness { rows, cols, value: v });
        }
        Ok(())
    };
    for k in 1..=n {
        check((0..k).collect(), (0..k).collect())?;
    }
    // Lower-left block: rows 1..n, columns 0..n-1.
    for k in 1..n {
        check((1..=k).collect(), (0..k).collect())?;
    }
    Ok(PositivityVerdict {
        mode: PositivityMode::PinkusHankel,
        totally_positive: witness.is_none(),
        totally_nonnegative: None,
        minors_checked: checked,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int_matrix;

    #[test]
    fn small_cases() {
        let bad = int_matrix(&[&[1, 2], &[3, 1]]);
        let v = total_positivity(&bad, PositivityMode::AllMinors).unwrap();
        assert!(!v.totally_positive);
        assert_eq!(v.totally_nonnegative, Some(false));
        let id = ExactMatrix::identity(3);
        let v = total_positivity(&id, PositivityMode::AllMinors).unwrap();
        assert!(!v.totally_positive);
        assert_eq!(v.totally_nonnegative, Some(true));
        assert!(total_positivity(&bad, PositivityMode::PinkusHankel).is_err());
    }

    #[test]
    fn subset_counts() {
        assert_eq!(subsets(5, 2).len(), 10);
        assert_eq!(subsets(4, 0), vec![Vec::<usize>::new()]);
    }
}
