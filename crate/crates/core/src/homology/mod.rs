//! Rational homology of flag skeletons.
//!
//! Betti numbers come from ranks of boundary matrices,
//! `β_d = f_d - rank ∂_d - rank ∂_{d+1}`. Over a field of characteristic
//! zero homology and cohomology have the same dimensions, so these also
//! decide cohomology vanishing.

mod boundary;
mod rank;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::FlagSkeleton;

pub use boundary::{composes_to_zero, BoundaryMatrix};
pub use rank::{rank_bareiss, rank_exact, rank_mod_p, rank_modular, DEFAULT_PRIMES};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HomologyError {
    #[error("boundary dimension {d} outside 1..={cap}")]
    DimensionOutOfRange { d: usize, cap: usize },
    #[error("degree {degree} needs the {needed}-skeleton but the cap is {cap}")]
    CapTooSmall { degree: usize, needed: usize, cap: usize },
    #[error("{0} is not a prime above 2^30 and below 2^32")]
    BadPrime(u64),
    #[error("primes must be distinct")]
    RepeatedPrime,
}

/// How ranks are computed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankMethod {
    /// Fraction-free elimination over the integers.
    Exact,
    /// Ranks modulo each prime; if the primes disagree on any matrix the
    /// rank is recomputed exactly.
    Modular(Vec<u64>),
}

impl Default for RankMethod {
    fn default() -> Self {
        RankMethod::Modular(DEFAULT_PRIMES.to_vec())
    }
}

impl RankMethod {
    pub fn validate(&self) -> Result<(), HomologyError> {
        if let RankMethod::Modular(primes) = self {
            for &p in primes {
                if !(p > 1 << 30 && p < 1 << 32 && is_prime(p)) {
                    return Err(HomologyError::BadPrime(p));
                }
            }
            let mut sorted = primes.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != primes.len() {
                return Err(HomologyError::RepeatedPrime);
            }
        }
        Ok(())
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Rank of one boundary matrix by `method`. The flag reports whether the
/// modular ranks disagreed and the exact path was taken.
pub fn rank_with(m: &BoundaryMatrix, method: &RankMethod) -> (usize, bool) {
    match method {
        RankMethod::Exact => (rank_exact(m), false),
        RankMethod::Modular(primes) => {
            let ranks: Vec<usize> = primes.iter().map(|&p| rank_mod_p(m, p)).collect();
            if ranks.windows(2).all(|w| w[0] == w[1]) {
                (ranks.first().copied().unwrap_or_else(|| rank_exact(m)), primes.is_empty())
            } else {
                (rank_exact(m), true)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BettiVector {
    pub f_vector: Vec<usize>,
    /// `ranks[d] = rank ∂_d` for `d = 0..=cap`, with `ranks[0] = 0`.
    pub ranks: Vec<usize>,
    /// Unreduced Betti numbers `β_0..=β_top` of the flag complex.
    pub betti: Vec<usize>,
    pub method: RankMethod,
    /// Whether the modular ranks disagreed somewhere and exact rank was used.
    pub escalated: bool,
}

impl BettiVector {
    /// Betti numbers of the truncated chain complex `C_0 <- ... <- C_cap`.
    pub fn chain_betti(&self) -> Vec<i64> {
        let cap = self.f_vector.len() - 1;
        (0..=cap)
            .map(|d| {
                let next = if d < cap { self.ranks[d + 1] } else { 0 };
                self.f_vector[d] as i64 - self.ranks[d] as i64 - next as i64
            })
            .collect()
    }

    /// Euler characteristic from faces equals the one from chain Betti
    /// numbers, and all chain Betti numbers are non-negative.
    pub fn euler_holds(&self) -> bool {
        let alt = |xs: &mut dyn Iterator<Item = i64>| {
            xs.enumerate()
                .map(|(d, x)| if d % 2 == 0 { x } else { -x })
                .sum::<i64>()
        };
        let chain = self.chain_betti();
        chain.iter().all(|&b| b >= 0)
            && alt(&mut self.f_vector.iter().map(|&f| f as i64)) == alt(&mut chain.into_iter())
    }

    pub fn get(&self, d: usize) -> Option<usize> {
        self.betti.get(d).copied()
    }

    /// Reduced Betti numbers: `β̃_0 = β_0 - 1` for a nonempty complex.
    pub fn reduced(&self) -> Vec<usize> {
        let mut out = self.betti.clone();
        if self.f_vector.first().copied().unwrap_or(0) > 0 {
            out[0] -= 1;
        }
        out
    }

    /// Degrees with a nonzero reduced Betti number.
    pub fn reduced_support(&self) -> Vec<usize> {
        self.reduced()
            .iter()
            .enumerate()
            .filter(|(_, &b)| b > 0)
            .map(|(d, _)| d)
            .collect()
    }

    pub fn report(&self) -> BettiReport {
        BettiReport {
            f_vector: self.f_vector.clone(),
            ranks: self.ranks.clone(),
            betti: self.betti.clone(),
            method: match self.method {
                RankMethod::Exact => "exact".into(),
                RankMethod::Modular(_) if self.escalated => "modular+exact".into(),
                RankMethod::Modular(_) => "modular".into(),
            },
            primes: match &self.method {
                RankMethod::Exact => Vec::new(),
                RankMethod::Modular(p) => p.clone(),
            },
        }
    }
}

/// JSON form of a [`BettiVector`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BettiReport {
    pub f_vector: Vec<usize>,
    pub ranks: Vec<usize>,
    pub betti: Vec<usize>,
    pub method: String,
    pub primes: Vec<u64>,
}

/// Highest degree whose Betti number the skeleton determines: every degree
/// below the cap, plus the cap itself when the graph has no larger cliques.
/// Trailing degrees without faces are dropped.
fn top_degree(sk: &FlagSkeleton) -> Option<usize> {
    let cap = sk.cap();
    let f = sk.f_vector();
    let has_bigger = f[cap] > 0 && has_coface(sk, cap);
    let mut top = if has_bigger { cap.checked_sub(1)? } else { cap };
    while top > 0 && f[top] == 0 {
        top -= 1;
    }
    Some(top)
}

fn has_coface(sk: &FlagSkeleton, d: usize) -> bool {
    let mut members = Vec::with_capacity(d + 1);
    sk.face_list(d).is_some_and(|list| {
        list.iter().any(|face| {
            members.clear();
            members.extend(face.iter().map(|&v| v as usize));
            sk.graph()
                .common_neighbors(&members)
                .is_ok_and(|c| !c.is_empty())
        })
    })
}

/// All Betti numbers the skeleton determines.
pub fn betti(sk: &FlagSkeleton, method: &RankMethod) -> Result<BettiVector, HomologyError> {
    method.validate()?;
    let cap = sk.cap();
    let mut ranks = vec![0usize; cap + 1];
    let mut escalated = false;
    for (d, slot) in ranks.iter_mut().enumerate().skip(1) {
        let m = BoundaryMatrix::new(sk, d)?;
        let (r, esc) = rank_with(&m, method);
        *slot = r;
        escalated |= esc;
    }
    let f = sk.f_vector();
    let betti = match top_degree(sk) {
        Some(top) => (0..=top)
            .map(|d| {
                let next = if d < cap { ranks[d + 1] } else { 0 };
                f[d] - ranks[d] - next
            })
            .collect(),
        None => Vec::new(),
    };
    Ok(BettiVector {
        f_vector: f,
        ranks,
        betti,
        method: method.clone(),
        escalated,
    })
}

/// `β_k` alone, computing only `rank ∂_k` and `rank ∂_{k+1}`.
pub fn betti_number(sk: &FlagSkeleton, k: usize, method: &RankMethod) -> Result<usize, HomologyError> {
    method.validate()?;
    if k + 1 > sk.cap() {
        return Err(HomologyError::CapTooSmall {
            degree: k,
            needed: k + 1,
            cap: sk.cap(),
        });
    }
    let f = sk.f_vector();
    let lower = if k == 0 { 0 } else { rank_with(&BoundaryMatrix::new(sk, k)?, method).0 };
    let upper = rank_with(&BoundaryMatrix::new(sk, k + 1)?, method).0;
    Ok(f[k] - lower - upper)
}

/// Weak Morse inequality bound `β_k >= f_k - f_{k-1} - f_{k+1}`; absent
/// entries count as zero.
pub fn morse_lower_bound(f_vector: &[usize], k: usize) -> i64 {
    let at = |d: Option<usize>| d.and_then(|d| f_vector.get(d)).copied().unwrap_or(0) as i64;
    at(Some(k)) - at(k.checked_sub(1)) - at(Some(k + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn octahedron() -> Graph {
        let mut edges = Vec::new();
        for u in 0..6 {
            for v in u + 1..6 {
                if u / 2 != v / 2 {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(6, &edges).unwrap()
    }

    #[test]
    fn boundary_examples() {
        let sk = FlagSkeleton::build(&Graph::complete(3), 2);
        let d2 = BoundaryMatrix::new(&sk, 2).unwrap();
        // edges in order 01, 02, 12; face 012 -> +12 -02 +01
        assert_eq!(d2.to_dense(), vec![1, -1, 1]);
        let sk = FlagSkeleton::build(&Graph::cycle(4), 2);
        let d2 = BoundaryMatrix::new(&sk, 2).unwrap();
        assert_eq!((d2.nrows(), d2.ncols()), (4, 0));
        let sk = FlagSkeleton::build(&Graph::complete(4), 3);
        let d1 = BoundaryMatrix::new(&sk, 1).unwrap();
        assert_eq!((d1.nrows(), d1.ncols()), (4, 6));
        assert_eq!(rank_exact(&d1), 3);
        assert!(BoundaryMatrix::new(&sk, 0).is_err());
        assert!(BoundaryMatrix::new(&sk, 4).is_err());
    }

    #[test]
    fn rank_examples() {
        let sk = FlagSkeleton::build(&Graph::cycle(4), 2);
        let zero = BoundaryMatrix::new(&sk, 2).unwrap();
        assert_eq!(rank_exact(&zero), 0);
        assert_eq!(rank_modular(&zero, &DEFAULT_PRIMES), 0);
        let k4 = FlagSkeleton::build(&Graph::complete(4), 3);
        let d1 = BoundaryMatrix::new(&k4, 1).unwrap();
        assert_eq!(rank_modular(&d1, &DEFAULT_PRIMES[..1]), 3);
        let oct = FlagSkeleton::build(&octahedron(), 2);
        let d2 = BoundaryMatrix::new(&oct, 2).unwrap();
        assert_eq!(rank_exact(&d2), 7);
        assert_eq!(rank_modular(&d2, &DEFAULT_PRIMES), 7);
    }

    #[test]
    fn betti_examples() {
        let exact = RankMethod::Exact;
        let oct = FlagSkeleton::build(&octahedron(), 2);
        assert_eq!(betti(&oct, &exact).unwrap().betti, vec![1, 0, 1]);
        let oct3 = FlagSkeleton::build(&octahedron(), 3);
        assert_eq!(betti(&oct3, &RankMethod::default()).unwrap().betti, vec![1, 0, 1]);
        let c4 = FlagSkeleton::build(&Graph::cycle(4), 2);
        assert_eq!(betti(&c4, &exact).unwrap().betti, vec![1, 1]);
        let k4 = FlagSkeleton::build(&Graph::complete(4), 3);
        let b = betti(&k4, &exact).unwrap();
        assert_eq!(b.betti, vec![1, 0, 0, 0]);
        assert_eq!(b.reduced_support(), Vec::<usize>::new());
        assert!(b.euler_holds());
    }

    #[test]
    fn truncated_skeleton_withholds_top_degree() {
        // K4 with cap 2: tetrahedra exist, so β_2 of the complex is unknown
        let sk = FlagSkeleton::build(&Graph::complete(4), 2);
        let b = betti(&sk, &RankMethod::Exact).unwrap();
        assert_eq!(b.betti, vec![1, 0]);
        assert_eq!(b.chain_betti(), vec![1, 0, 1]);
        assert!(b.euler_holds());
        assert_eq!(
            betti_number(&sk, 2, &RankMethod::Exact),
            Err(HomologyError::CapTooSmall { degree: 2, needed: 3, cap: 2 })
        );
        assert_eq!(betti_number(&sk, 1, &RankMethod::Exact), Ok(0));
    }

    #[test]
    fn reduced_betti() {
        let c4 = FlagSkeleton::build(&Graph::cycle(4), 2);
        let b = betti(&c4, &RankMethod::Exact).unwrap();
        assert_eq!(b.reduced(), vec![0, 1]);
        assert_eq!(b.reduced_support(), vec![1]);
        let empty = FlagSkeleton::build(&Graph::empty(0), 1);
        let b = betti(&empty, &RankMethod::Exact).unwrap();
        assert_eq!(b.betti, vec![0]);
        assert_eq!(b.reduced(), vec![0]);
    }

    #[test]
    fn morse_examples() {
        assert_eq!(morse_lower_bound(&[6, 12, 8], 1), -2);
        assert_eq!(morse_lower_bound(&[4, 4, 0], 1), 0);
        assert_eq!(morse_lower_bound(&[10, 60, 20], 1), 30);
        assert_eq!(morse_lower_bound(&[10, 60], 0), -50);
        assert_eq!(morse_lower_bound(&[10], 3), 0);
    }

    #[test]
    fn method_validation() {
        assert!(RankMethod::default().validate().is_ok());
        assert_eq!(
            RankMethod::Modular(vec![7]).validate(),
            Err(HomologyError::BadPrime(7))
        );
        assert_eq!(
            RankMethod::Modular(vec![DEFAULT_PRIMES[0], DEFAULT_PRIMES[0]]).validate(),
            Err(HomologyError::RepeatedPrime)
        );
        assert_eq!(
            RankMethod::Modular(vec![(1 << 30) + 1]).validate(),
            Err(HomologyError::BadPrime((1 << 30) + 1))
        );
    }

    #[test]
    fn report_json_fields() {
        let sk = FlagSkeleton::build(&Graph::cycle(4), 2);
        let r = betti(&sk, &RankMethod::default()).unwrap().report();
        let json = serde_json::to_value(&r).unwrap();
        for key in ["f_vector", "ranks", "betti", "method", "primes"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        assert_eq!(json["method"], "modular");
    }
}
