//! Sparse Gaussian elimination over the rationals.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::symexpr::Rational;

pub type SparseRow = BTreeMap<usize, Rational>;

/// Rows of `sum_j a_j x_j = b`, reduced incrementally to echelon form.
#[derive(Default)]
pub struct SparseSystem {
    pivots: BTreeMap<usize, (SparseRow, Rational)>,
    inconsistent: bool,
}

fn axpy(row: &mut SparseRow, k: &Rational, other: &SparseRow) {
    for (c, v) in other {
        let slot = row.entry(*c).or_insert_with(Rational::zero);
        *slot -= k * v;
        if slot.is_zero() {
            row.remove(c);
        }
    }
}

impl SparseSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_equation(&mut self, mut row: SparseRow, mut rhs: Rational) {
        row.retain(|_, v| !v.is_zero());
        loop {
            let next = row
                .iter()
                .find(|(c, _)| self.pivots.contains_key(c))
                .map(|(c, v)| (*c, v.clone()));
            let Some((c, k)) = next else { break };
            let (prow, prhs) = &self.pivots[&c];
            axpy(&mut row, &k, prow);
            rhs -= &k * prhs;
        }
        match row.keys().next().copied() {
            None => {
                if !rhs.is_zero() {
                    self.inconsistent = true;
                }
            }
            Some(c) => {
                let lead = row[&c].clone();
                for v in row.values_mut() {
                    *v /= &lead;
                }
                rhs /= &lead;
                self.pivots.insert(c, (row, rhs));
            }
        }
    }

    /// One solution with all free unknowns set to zero.
    pub fn solve(&self, unknowns: usize) -> Option<Vec<Rational>> {
        if self.inconsistent {
            return None;
        }
        let mut x = vec![Rational::zero(); unknowns];
        for (c, (row, rhs)) in self.pivots.iter().rev() {
            let mut v = rhs.clone();
            for (k, a) in row.range(c + 1..) {
                v -= a * &x[*k];
            }
            x[*c] = v;
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::int;

    fn row(entries: &[(usize, i64)]) -> SparseRow {
        entries.iter().map(|&(c, v)| (c, int(v))).collect()
    }

    #[test]
    fn solves_small_system() {
        let mut s = SparseSystem::new();
        s.add_equation(row(&[(0, 1), (1, 1)]), int(3));
        s.add_equation(row(&[(0, 1), (1, -1)]), int(1));
        assert_eq!(s.solve(2).unwrap(), vec![int(2), int(1)]);
    }

    #[test]
    fn detects_inconsistency() {
        let mut s = SparseSystem::new();
        s.add_equation(row(&[(0, 2)]), int(2));
        s.add_equation(row(&[(0, 1)]), int(3));
        assert!(s.solve(1).is_none());
    }

    #[test]
    fn underdetermined_picks_zero_for_free() {
        let mut s = SparseSystem::new();
        s.add_equation(row(&[(0, 1), (2, 1)]), int(5));
        assert_eq!(s.solve(3).unwrap(), vec![int(5), int(0), int(0)]);
    }
}
