//! Matrix rank over prime fields and over the rationals.
//!
//! Sparse matrices are reduced vector by vector against a pivot table keyed
//! by each vector's largest index. Over `GF(p)` pivots are made monic. Over
//! the integers the update is fraction-free, `t <- (q/g) t - (l/g) v` with
//! `g = gcd(l, q)`, followed by division by the content of `t`; every step
//! preserves the rational span, so the rank is exact. Machine integers are
//! tried first and the computation restarts on big integers on overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, Signed};

use super::BoundaryMatrix;

/// Largest primes below 2^31; all exceed 2^30 as required for the fast path.
pub const DEFAULT_PRIMES: [u64; 2] = [2_147_483_647, 2_147_483_629];

type Sparse<E> = Vec<(u32, E)>;

#[derive(Debug)]
struct Overflow;

trait Arith {
    type E: Clone;
    fn lift(&self, x: i8) -> Self::E;
    fn is_zero(&self, x: &Self::E) -> bool;
    /// Scales a nonempty vector into the canonical form used for pivots.
    fn normalize(&self, v: &mut Sparse<Self::E>) -> Result<(), Overflow>;
    /// Cancels the last entry of `target` using `pivot`, which has the same
    /// last index. Writes the result to `out`.
    fn reduce(
        &self,
        target: &Sparse<Self::E>,
        pivot: &Sparse<Self::E>,
        out: &mut Sparse<Self::E>,
    ) -> Result<(), Overflow>;
}

struct ModP(u64);

impl Arith for ModP {
    type E = u64;

    fn lift(&self, x: i8) -> u64 {
        if x >= 0 {
            x as u64 % self.0
        } else {
            self.0 - (-(x as i64)) as u64 % self.0
        }
    }

    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }

    fn normalize(&self, v: &mut Sparse<u64>) -> Result<(), Overflow> {
        let lead = v.last().expect("nonempty").1;
        if lead != 1 {
            let inv = mod_inverse(lead, self.0);
            for (_, x) in v.iter_mut() {
                *x = *x * inv % self.0;
            }
        }
        Ok(())
    }

    fn reduce(&self, t: &Sparse<u64>, pivot: &Sparse<u64>, out: &mut Sparse<u64>) -> Result<(), Overflow> {
        // pivot is monic: t - lead(t) * pivot
        let p = self.0;
        let factor = p - t.last().expect("nonempty").1;
        merge(t, pivot, out, |a| *a, |b| b * factor % p, |a, b| (a + b * factor) % p, |x| *x == 0);
        Ok(())
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2)
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Sorted merge of `a + b` with per-side transforms; zero results dropped.
#[inline]
fn merge<E, FA, FB, FAB, Z>(a: &Sparse<E>, b: &Sparse<E>, out: &mut Sparse<E>, fa: FA, fb: FB, fab: FAB, zero: Z)
where
    FA: Fn(&E) -> E,
    FB: Fn(&E) -> E,
    FAB: Fn(&E, &E) -> E,
    Z: Fn(&E) -> bool,
{
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let (ia, ib) = (a[i].0, b[j].0);
        if ia < ib {
            out.push((ia, fa(&a[i].1)));
            i += 1;
        } else if ib < ia {
            out.push((ib, fb(&b[j].1)));
            j += 1;
        } else {
            let x = fab(&a[i].1, &b[j].1);
            if !zero(&x) {
                out.push((ia, x));
            }
            i += 1;
            j += 1;
        }
    }
    out.extend(a[i..].iter().map(|(k, x)| (*k, fa(x))));
    out.extend(b[j..].iter().map(|(k, x)| (*k, fb(x))));
}

/// Exact integer arithmetic for the fraction-free update.
pub(crate) trait ExactInt: Clone + Integer + Signed + CheckedMul + CheckedSub + From<i8> {}
impl ExactInt for i64 {}
impl ExactInt for i128 {}
impl ExactInt for BigInt {}

struct Integers<T>(std::marker::PhantomData<T>);

impl<T: ExactInt> Arith for Integers<T> {
    type E = T;

    fn lift(&self, x: i8) -> T {
        T::from(x)
    }

    fn is_zero(&self, x: &T) -> bool {
        x.is_zero()
    }

    fn normalize(&self, v: &mut Sparse<T>) -> Result<(), Overflow> {
        let mut content = T::zero();
        for (_, x) in v.iter() {
            content = content.gcd(x);
            if content.is_one() {
                break;
            }
        }
        if v.last().expect("nonempty").1.is_negative() {
            content = -content;
        }
        if !content.is_one() {
            for (_, x) in v.iter_mut() {
                *x = x.div_floor(&content);
            }
        }
        Ok(())
    }

    fn reduce(&self, t: &Sparse<T>, pivot: &Sparse<T>, out: &mut Sparse<T>) -> Result<(), Overflow> {
        let l = &t.last().expect("nonempty").1;
        let q = &pivot.last().expect("nonempty").1;
        let g = l.gcd(q);
        let tq = q.div_floor(&g);
        let tl = l.div_floor(&g);
        let overflow = std::cell::Cell::new(false);
        let mul = |a: &T, b: &T| {
            a.checked_mul(b).unwrap_or_else(|| {
                overflow.set(true);
                T::zero()
            })
        };
        let sub = |a: T, b: T| {
            a.checked_sub(&b).unwrap_or_else(|| {
                overflow.set(true);
                T::zero()
            })
        };
        merge(
            t,
            pivot,
            out,
            |a| mul(a, &tq),
            |b| T::zero() - mul(b, &tl),
            |a, b| sub(mul(a, &tq), mul(b, &tl)),
            |x| x.is_zero(),
        );
        if overflow.get() {
            return Err(Overflow);
        }
        if let Some(last) = out.last() {
            if last.0 == t.last().expect("nonempty").0 {
                // exact cancellation failed; cannot happen with exact arithmetic
                return Err(Overflow);
            }
        }
        if !out.is_empty() {
            self.normalize(out)?;
        }
        Ok(())
    }
}

/// Rank of the span of `vectors`, each sorted by index, all indices `< dim`.
fn sparse_rank<A: Arith>(arith: &A, dim: usize, vectors: &[Sparse<i8>]) -> Result<usize, Overflow> {
    let mut pivot_of: Vec<u32> = vec![u32::MAX; dim];
    let mut pivots: Vec<Sparse<A::E>> = Vec::new();
    let mut cur: Sparse<A::E> = Vec::new();
    let mut scratch: Sparse<A::E> = Vec::new();
    for v in vectors {
        cur.clear();
        cur.extend(v.iter().map(|&(i, x)| (i, arith.lift(x))).filter(|(_, x)| !arith.is_zero(x)));
        while let Some(&(lead, _)) = cur.last() {
            let slot = pivot_of[lead as usize];
            if slot == u32::MAX {
                arith.normalize(&mut cur)?;
                pivot_of[lead as usize] = pivots.len() as u32;
                pivots.push(std::mem::take(&mut cur));
                break;
            }
            arith.reduce(&cur, &pivots[slot as usize], &mut scratch)?;
            std::mem::swap(&mut cur, &mut scratch);
        }
    }
    Ok(pivots.len())
}

/// Which view of a boundary matrix is fed to the sparse reducer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Orientation {
    /// Columns (faces), indexed by facets. Only exercised by tests.
    #[cfg_attr(not(test), allow(dead_code))]
    Columns,
    /// Rows (facets), indexed by cofaces.
    Rows,
}

const ORIENTATION: Orientation = Orientation::Rows;

fn vectors(m: &BoundaryMatrix, orientation: Orientation) -> (usize, Vec<Sparse<i8>>) {
    match orientation {
        Orientation::Columns => (m.nrows(), (0..m.ncols()).map(|c| m.sorted_column(c)).collect()),
        Orientation::Rows => (m.ncols(), m.sorted_rows()),
    }
}

pub(crate) fn rank_mod_p_oriented(m: &BoundaryMatrix, p: u64, orientation: Orientation) -> usize {
    let (dim, vs) = vectors(m, orientation);
    sparse_rank(&ModP(p), dim, &vs).expect("modular arithmetic cannot overflow")
}

/// Rank over `GF(p)`. `p` must be an odd prime below 2^32.
pub fn rank_mod_p(m: &BoundaryMatrix, p: u64) -> usize {
    rank_mod_p_oriented(m, p, ORIENTATION)
}

/// Maximum of the ranks over the given primes. Each is a lower bound for the
/// rational rank.
pub fn rank_modular(m: &BoundaryMatrix, primes: &[u64]) -> usize {
    primes.iter().map(|&p| rank_mod_p(m, p)).max().unwrap_or(0)
}

pub(crate) fn rank_integer_oriented(m: &BoundaryMatrix, orientation: Orientation) -> usize {
    let (dim, vs) = vectors(m, orientation);
    match sparse_rank(&Integers::<i64>(Default::default()), dim, &vs) {
        Ok(r) => r,
        Err(Overflow) => sparse_rank(&Integers::<BigInt>(Default::default()), dim, &vs)
            .expect("big integers do not overflow"),
    }
}

/// Dense matrices at most this large go through Bareiss elimination.
const DENSE_LIMIT: usize = 1 << 14;

/// Exact rank over the rationals.
pub fn rank_exact(m: &BoundaryMatrix) -> usize {
    if m.nrows() * m.ncols() <= DENSE_LIMIT {
        rank_bareiss(m.nrows(), m.ncols(), &m.to_dense())
    } else {
        rank_integer_oriented(m, ORIENTATION)
    }
}

/// Rank over the rationals of a dense row-major integer matrix by
/// fraction-free Bareiss elimination with row pivoting.
pub fn rank_bareiss(rows: usize, cols: usize, entries: &[i8]) -> usize {
    assert_eq!(entries.len(), rows * cols);
    bareiss::<i128>(rows, cols, entries)
        .unwrap_or_else(|| bareiss::<BigInt>(rows, cols, entries).expect("big integers do not overflow"))
}

fn bareiss<T: ExactInt>(rows: usize, cols: usize, entries: &[i8]) -> Option<usize> {
    let mut a: Vec<T> = entries.iter().map(|&x| T::from(x)).collect();
    let mut prev = T::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| !a[r * cols + c].is_zero()) else {
            continue;
        };
        if piv != rank {
            for j in 0..cols {
                a.swap(piv * cols + j, rank * cols + j);
            }
        }
        let pv = a[rank * cols + c].clone();
        for r in rank + 1..rows {
            let lead = a[r * cols + c].clone();
            for j in c + 1..cols {
                let x = a[r * cols + j].checked_mul(&pv)?;
                let y = lead.checked_mul(&a[rank * cols + j])?;
                let num = x.checked_sub(&y)?;
                // Sylvester's identity: the division is exact
                a[r * cols + j] = num.div_floor(&prev);
            }
            a[r * cols + c] = T::zero();
        }
        prev = pv;
        rank += 1;
    }
    Some(rank)
}
