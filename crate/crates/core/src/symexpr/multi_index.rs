use std::cmp::Ordering;
use std::fmt;

/// A commutative multi-index over `n` independent variables, stored as a
/// vector of counts. `[1, 2]` over `(t, x)` stands for `t x x`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    counts: Vec<u32>,
}

impl MultiIndex {
    /// The empty multi-index over `n` variables.
    pub fn empty(n: usize) -> Self {
        Self { counts: vec![0; n] }
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        Self { counts }
    }

    /// Builds an index from a list of variable positions, e.g. `[0, 1, 1]`.
    pub fn from_positions(n: usize, positions: &[usize]) -> Self {
        let mut counts = vec![0; n];
        for &p in positions {
            counts[p] += 1;
        }
        Self { counts }
    }

    pub fn unit(n: usize, i: usize) -> Self {
        Self::from_positions(n, &[i])
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn count(&self, i: usize) -> u32 {
        self.counts[i]
    }

    /// `|I|`.
    pub fn order(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    /// `I i`.
    pub fn with(&self, i: usize) -> Self {
        let mut counts = self.counts.clone();
        counts[i] += 1;
        Self { counts }
    }

    /// `I` with one occurrence of `i` removed, if present.
    pub fn without(&self, i: usize) -> Option<Self> {
        if self.counts[i] == 0 {
            return None;
        }
        let mut counts = self.counts.clone();
        counts[i] -= 1;
        Some(Self { counts })
    }

    /// `IJ`.
    pub fn join(&self, other: &Self) -> Self {
        let counts = self
            .counts
            .iter()
            .zip(&other.counts)
            .map(|(a, b)| a + b)
            .collect();
        Self { counts }
    }

    /// `I - J` when `J <= I` componentwise.
    pub fn minus(&self, other: &Self) -> Option<Self> {
        let mut counts = Vec::with_capacity(self.counts.len());
        for (a, b) in self.counts.iter().zip(&other.counts) {
            counts.push(a.checked_sub(*b)?);
        }
        Some(Self { counts })
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.counts.iter().zip(&other.counts).all(|(a, b)| a <= b)
    }

    /// Positions in non-decreasing order: `t x x` gives `[0, 1, 1]`.
    pub fn positions(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.order() as usize);
        for (i, &c) in self.counts.iter().enumerate() {
            for _ in 0..c {
                out.push(i);
            }
        }
        out
    }

    /// Largest variable position occurring in the index.
    pub fn last_position(&self) -> Option<usize> {
        self.counts.iter().rposition(|&c| c > 0)
    }

    /// Every `J <= I` componentwise, each paired with the multinomial
    /// coefficient `prod_i C(I_i, J_i)`.
    pub fn sub_indices(&self) -> Vec<(MultiIndex, u64)> {
        let mut out = vec![(Vec::new(), 1u64)];
        for &c in &self.counts {
            let mut next = Vec::with_capacity(out.len() * (c as usize + 1));
            for (prefix, coeff) in &out {
                for j in 0..=c {
                    let mut p = prefix.clone();
                    p.push(j);
                    next.push((p, coeff * binomial(c, j)));
                }
            }
            out = next;
        }
        out.into_iter()
            .map(|(counts, c)| (MultiIndex { counts }, c))
            .collect()
    }

    /// All multi-indices over `n` variables with order at most `max_order`,
    /// in ascending graded-lex order.
    pub fn all_up_to(n: usize, max_order: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for order in 0..=max_order {
            let mut level = Vec::new();
            compositions(n, order, &mut Vec::new(), &mut level);
            level.sort();
            out.extend(level);
        }
        out
    }
}

fn compositions(n: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if prefix.len() + 1 == n {
        prefix.push(remaining);
        out.push(MultiIndex::from_counts(prefix.clone()));
        prefix.pop();
        return;
    }
    if n == 0 {
        return;
    }
    for c in 0..=remaining {
        prefix.push(c);
        compositions(n, remaining - c, prefix, out);
        prefix.pop();
    }
}

pub(crate) fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * u64::from(n - i) / u64::from(i + 1);
    }
    acc
}

/// Graded-lex: first by order, then lexicographically on the count vector.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.counts.cmp(&other.counts))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I{:?}", self.counts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_and_join() {
        let tx = MultiIndex::from_positions(2, &[0, 1]);
        assert_eq!(tx.order(), 2);
        let t = MultiIndex::unit(2, 0);
        assert_eq!(t.join(&tx).counts(), &[2, 1]);
        assert_eq!(tx.without(0).unwrap(), MultiIndex::unit(2, 1));
        assert!(t.without(1).is_none());
    }

    #[test]
    fn graded_lex() {
        let o = MultiIndex::empty(2);
        let t = MultiIndex::unit(2, 0);
        let xx = MultiIndex::from_positions(2, &[1, 1]);
        let tt = MultiIndex::from_positions(2, &[0, 0]);
        assert!(o < t && t < xx && xx < tt);
    }

    #[test]
    fn sub_indices_carry_binomials() {
        let ttx = MultiIndex::from_positions(2, &[0, 0, 1]);
        let subs = ttx.sub_indices();
        assert_eq!(subs.len(), 6);
        let total: u64 = subs.iter().map(|(_, c)| c).sum();
        assert_eq!(total, 8);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(MultiIndex::all_up_to(2, 2).len(), 6);
        assert_eq!(MultiIndex::all_up_to(1, 3).len(), 4);
    }
}
