//! Exact scalars, permutations, shuffles and Koszul signs.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qfrac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn sign(odd: bool) -> Q {
    if odd {
        -Q::one()
    } else {
        Q::one()
    }
}

pub fn is_unit(x: &Q) -> bool {
    x.abs().is_one()
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Parse "3", "-2/5".
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().ok()?;
        let d: BigInt = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::new(n, d))
    } else {
        Some(Q::from_integer(s.parse().ok()?))
    }
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// A permutation of {1..n}, stored 0-based: `img[j] = σ(j+1) - 1`.
///
/// Acts on labels from the left: σ·f renames a_j to a_{σ(j)}.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    img: Vec<usize>,
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<usize> = self.img.iter().map(|x| x + 1).collect();
        write!(f, "Perm{:?}", v)
    }
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm { img: (0..n).collect() }
    }

    /// From 1-based images `[σ(1), .., σ(n)]`.
    pub fn from_images(images: &[usize]) -> Perm {
        let img: Vec<usize> = images.iter().map(|&x| x - 1).collect();
        let p = Perm { img };
        assert!(p.is_valid(), "not a permutation: {:?}", images);
        p
    }

    pub fn from_zero_based(img: Vec<usize>) -> Perm {
        let p = Perm { img };
        debug_assert!(p.is_valid());
        p
    }

    fn is_valid(&self) -> bool {
        let mut seen = vec![false; self.img.len()];
        for &x in &self.img {
            if x >= seen.len() || seen[x] {
                return false;
            }
            seen[x] = true;
        }
        true
    }

    /// The transposition of `a` and `b` (1-based) in S_n.
    pub fn transposition(n: usize, a: usize, b: usize) -> Perm {
        let mut p = Perm::identity(n);
        p.img.swap(a - 1, b - 1);
        p
    }

    /// The cycle (a, a+1, .., b) in S_n: a ↦ a+1 ↦ .. ↦ b ↦ a.
    pub fn cycle(n: usize, a: usize, b: usize) -> Perm {
        let mut p = Perm::identity(n);
        if a < b {
            for j in a..b {
                p.img[j - 1] = j;
            }
            p.img[b - 1] = a - 1;
        }
        p
    }

    pub fn len(&self) -> usize {
        self.img.len()
    }

    pub fn is_empty(&self) -> bool {
        self.img.is_empty()
    }

    /// σ(j), 1-based.
    pub fn apply(&self, j: usize) -> usize {
        self.img[j - 1] + 1
    }

    pub fn images(&self) -> Vec<usize> {
        self.img.iter().map(|x| x + 1).collect()
    }

    pub fn zero_based(&self) -> &[usize] {
        &self.img
    }

    /// (self ∘ other)(j) = self(other(j)).
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.len(), other.len());
        Perm { img: other.img.iter().map(|&j| self.img[j]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.img.len()];
        for (j, &x) in self.img.iter().enumerate() {
            inv[x] = j;
        }
        Perm { img: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(j, &x)| j == x)
    }

    /// Parity of the number of inversions.
    pub fn is_odd(&self) -> bool {
        let mut odd = false;
        for i in 0..self.img.len() {
            for j in i + 1..self.img.len() {
                if self.img[i] > self.img[j] {
                    odd = !odd;
                }
            }
        }
        odd
    }

    /// σ ⊕ τ acting on {1..n+m}: σ on the first n letters, τ shifted on the rest.
    pub fn direct_sum(&self, other: &Perm) -> Perm {
        let n = self.len();
        let mut img = self.img.clone();
        img.extend(other.img.iter().map(|x| x + n));
        Perm { img }
    }

    /// Extend by fixed points up to size n.
    pub fn extend(&self, n: usize) -> Perm {
        let mut img = self.img.clone();
        img.extend(self.len()..n);
        Perm { img }
    }

    /// Identity on the first k letters, self shifted on the rest.
    pub fn shift(&self, k: usize) -> Perm {
        Perm::identity(k).direct_sum(self)
    }
}

/// All permutations of S_n in lexicographic order of image lists.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Perm>) {
        if cur.len() == n {
            out.push(Perm { img: cur.clone() });
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                rec(n, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

/// The (p1,..,pk)-shuffles: σ increasing on each consecutive block.
pub fn multi_shuffles(blocks: &[usize]) -> Vec<Perm> {
    let n: usize = blocks.iter().sum();
    let mut out = Vec::new();
    // assign each image value 0..n to a block, in increasing order per block
    let mut owner = vec![0usize; n];
    let mut left = blocks.to_vec();
    fn rec(pos: usize, n: usize, owner: &mut [usize], left: &mut [usize], blocks: &[usize], out: &mut Vec<Perm>) {
        if pos == n {
            // block b occupies the positions (in domain order) of its letters
            let mut starts = Vec::with_capacity(blocks.len());
            let mut acc = 0;
            for &b in blocks {
                starts.push(acc);
                acc += b;
            }
            let mut img = vec![0; n];
            let mut next = starts.clone();
            for (value, &b) in owner.iter().enumerate() {
                img[next[b]] = value;
                next[b] += 1;
            }
            out.push(Perm { img });
            return;
        }
        for b in 0..left.len() {
            if left[b] > 0 {
                left[b] -= 1;
                owner[pos] = b;
                rec(pos + 1, n, owner, left, blocks, out);
                left[b] += 1;
            }
        }
    }
    rec(0, n, &mut owner, &mut left, blocks, &mut out);
    out
}

pub fn shuffles(p: usize, q: usize) -> Vec<Perm> {
    multi_shuffles(&[p, q])
}

/// Koszul sign of reordering graded generators.
///
/// `slots[j]` is the degree of the generator sitting at position j; after the
/// reordering the generator from position j sits at position `perm(j)`.
pub fn koszul_sign(slots: &[i64], perm: &Perm) -> Q {
    sign(koszul_odd(slots, perm.zero_based()))
}

/// Parity version of [`koszul_sign`] on a 0-based target map.
pub fn koszul_odd(slots: &[i64], target: &[usize]) -> bool {
    assert_eq!(slots.len(), target.len());
    let mut odd = false;
    for i in 0..target.len() {
        if slots[i] % 2 == 0 {
            continue;
        }
        for j in i + 1..target.len() {
            if slots[j] % 2 != 0 && target[i] > target[j] {
                odd = !odd;
            }
        }
    }
    odd
}

/// Parity of moving items into a new order given as a list of source indices:
/// `order[k]` is the index of the item placed at position k.
pub fn koszul_odd_order(degrees: &[i64], order: &[usize]) -> bool {
    let mut target = vec![0; order.len()];
    for (k, &src) in order.iter().enumerate() {
        target[src] = k;
    }
    koszul_odd(degrees, &target)
}

pub fn is_zero(x: &Q) -> bool {
    x.is_zero()
}

pub fn is_negative(x: &Q) -> bool {
    x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shuffle_counts() {
        assert_eq!(shuffles(0, 3), vec![Perm::identity(3)]);
        assert_eq!(shuffles(2, 2).len(), 6);
        assert_eq!(shuffles(1, 1), vec![Perm::identity(2), Perm::transposition(2, 1, 2)]);
        assert_eq!(multi_shuffles(&[1, 1, 1]).len(), 6);
        assert_eq!(multi_shuffles(&[3]), vec![Perm::identity(3)]);
    }

    #[test]
    fn multi_shuffle_matches_brute_force_filter() {
        let blocks = [2, 1, 1];
        let brute: Vec<Perm> = all_perms(4)
            .into_iter()
            .filter(|s| s.apply(1) < s.apply(2))
            .collect();
        let ours = multi_shuffles(&blocks);
        assert_eq!(ours.len(), 12);
        assert_eq!(brute.len(), 12);
        for s in &ours {
            assert!(brute.contains(s));
        }
    }

    #[test]
    fn shuffles_are_monotone_on_blocks() {
        for p in 0..4 {
            for qq in 0..4 {
                let sh = shuffles(p, qq);
                assert_eq!(sh.len() as u64, binomial(p + qq, p));
                for s in sh {
                    for j in 1..p {
                        assert!(s.apply(j) < s.apply(j + 1));
                    }
                    for j in p + 1..p + qq {
                        assert!(s.apply(j) < s.apply(j + 1));
                    }
                }
            }
        }
    }

    #[test]
    fn koszul_examples() {
        let swap = Perm::transposition(2, 1, 2);
        assert_eq!(koszul_sign(&[-1, -1], &swap), q(-1));
        assert_eq!(koszul_sign(&[-1, 2], &swap), q(1));
        let c = Perm::from_images(&[2, 3, 1]);
        assert_eq!(koszul_sign(&[-1, -1, -1], &c), q(1));
    }

    #[test]
    fn koszul_cocycle_exhaustive() {
        let degs = [-1i64, 0, 1, 2];
        for n in 0..=4usize {
            let perms = all_perms(n);
            // all degree assignments
            let mut assign = vec![0usize; n];
            loop {
                let slots: Vec<i64> = assign.iter().map(|&k| degs[k]).collect();
                for s in &perms {
                    // slots after applying s
                    let mut moved = vec![0i64; n];
                    for j in 0..n {
                        moved[s.zero_based()[j]] = slots[j];
                    }
                    for t in &perms {
                        let lhs = koszul_sign(&slots, &t.compose(s));
                        let rhs = koszul_sign(&moved, t) * koszul_sign(&slots, s);
                        assert_eq!(lhs, rhs);
                    }
                }
                let mut k = 0;
                while k < n {
                    assign[k] += 1;
                    if assign[k] < degs.len() {
                        break;
                    }
                    assign[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
        }
    }

    #[test]
    fn shuffle_block_factorisation_is_unique() {
        for n in 0..=5usize {
            for p in 0..=n {
                let qq = n - p;
                let blocks: Vec<Perm> = all_perms(p)
                    .iter()
                    .flat_map(|a| all_perms(qq).into_iter().map(move |b| a.direct_sum(&b)))
                    .collect();
                let mut seen = std::collections::HashSet::new();
                for sh in shuffles(p, qq) {
                    for b in &blocks {
                        assert!(seen.insert(sh.compose(b)));
                    }
                }
                assert_eq!(seen.len() as u64, factorial(n));
            }
        }
    }

    #[test]
    fn perm_roundtrip_and_cycles() {
        for s in all_perms(4) {
            assert!(s.compose(&s.inverse()).is_identity());
        }
        let c = Perm::cycle(4, 1, 3);
        assert_eq!(c.images(), vec![2, 3, 1, 4]);
        assert!(Perm::cycle(3, 2, 2).is_identity());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_q("-2/4"), Some(qfrac(-1, 2)));
        assert_eq!(fmt_q(&qfrac(3, 6)), "1/2");
        assert_eq!(parse_q("x"), None);
    }
}
