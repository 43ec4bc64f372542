//! Integer points on `x² − D·y² = N` where `D = A² − 4`.
//!
//! The map `(x, y) → ((A·x + D·y)/2, (x + A·y)/2)` (multiplication by the
//! unit `(A + √D)/2`) preserves the conic. It stays integral exactly when
//! `x ≡ A·y (mod 2)`, which holds for every point whenever `N` is even, so
//! odd right-hand sides are rejected up front.
//!
//! The points with `y ≥ 0` split into finitely many orbits. Along one orbit
//! the ordinate is unimodal in the step count, so every orbit has a lowest
//! point; after flipping the sign of `x` to be nonnegative that point is the
//! orbit's representative. Representatives are found by brute force over
//! `0 ≤ y ≤ ⌈√(|N|(A+2)/(2D))⌉ + 2` and reduced to their orbit minimum.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Largest ordinate the representative search will scan.
pub const REP_SEARCH_LIMIT: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PellError {
    #[error("D = {d} is not positive and non-square; the conic is not hyperbolic")]
    NotHyperbolic { d: BigInt },
    #[error("D = {d} is not of the form A^2 - 4, so (A, 1) is not an automorph")]
    NoAutomorph { d: BigInt },
    #[error("N = 0 is excluded (x^2 = D y^2 has only the trivial point)")]
    ZeroRhs,
    #[error("N = {n} is odd; the half-integral automorph step is not integral on such conics")]
    OddRhs { n: BigInt },
    #[error("({x}, {y}) is not on {conic}")]
    NotOnConic { x: BigInt, y: BigInt, conic: Box<ConicSpec> },
    #[error("automorph step from ({x}, {y}) is not integral (x and A*y differ in parity)")]
    Parity { x: BigInt, y: BigInt },
    #[error("walk from ({x}, {y}) leaves y >= 0")]
    NegativeOrdinate { x: BigInt, y: BigInt },
    #[error("representative search needs y up to {needed}, above the limit {limit}")]
    SearchTooLarge { needed: BigUint, limit: u64 },
}

/// `x² − D·y² = N` together with its automorph trace `A` (`D = A² − 4`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConicSpec {
    trace: BigInt,
    d: BigInt,
    n: BigInt,
}

impl ConicSpec {
    pub fn from_trace(a: BigInt, n: BigInt) -> Self {
        let d: BigInt = &a * &a - 4;
        ConicSpec { trace: a.abs(), d, n }
    }

    /// Recovers `A = √(D + 4)`; fails when `D + 4` is not a perfect square.
    pub fn from_discriminant(d: BigInt, n: BigInt) -> Result<Self, PellError> {
        let shifted: BigInt = &d + 4;
        if shifted.is_negative() {
            return Err(PellError::NoAutomorph { d });
        }
        let a = shifted.sqrt();
        if &a * &a != shifted {
            return Err(PellError::NoAutomorph { d });
        }
        Ok(ConicSpec { trace: a, d, n })
    }

    /// The conic attached to `σ₂(n) − n² = A·n + B`: `D = A² − 4`, `N = 4(B − 1)`.
    pub fn for_equation(a: &BigInt, b: &BigInt) -> Self {
        Self::from_trace(a.clone(), (b - 1) * 4)
    }

    pub fn trace(&self) -> &BigInt {
        &self.trace
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    /// `D > 0` and not a perfect square.
    pub fn is_hyperbolic(&self) -> bool {
        if !self.d.is_positive() {
            return false;
        }
        let r = self.d.sqrt();
        &r * &r != self.d
    }

    pub fn contains(&self, x: &BigInt, y: &BigInt) -> bool {
        x * x - &self.d * y * y == self.n
    }

    pub fn point(&self, x: BigInt, y: BigUint) -> Result<ConicPoint, PellError> {
        let y_signed = BigInt::from(y.clone());
        if !self.contains(&x, &y_signed) {
            return Err(PellError::NotOnConic { x, y: y_signed, conic: Box::new(self.clone()) });
        }
        Ok(ConicPoint { x, y })
    }

    fn checked(&self, x: BigInt, y: BigInt) -> Result<ConicPoint, PellError> {
        match y.to_biguint() {
            Some(yu) => self.point(x, yu),
            None => Err(PellError::NegativeOrdinate { x, y }),
        }
    }

    fn step(&self, x: &BigInt, y: &BigInt, forward: bool) -> Result<(BigInt, BigInt), PellError> {
        let a = &self.trace;
        let (nx, ny) = if forward {
            (a * x + &self.d * y, x + a * y)
        } else {
            (a * x - &self.d * y, a * y - x)
        };
        if nx.is_odd() || ny.is_odd() {
            return Err(PellError::Parity { x: x.clone(), y: y.clone() });
        }
        Ok((nx >> 1u32, ny >> 1u32))
    }

    fn require_orbit_preconditions(&self) -> Result<(), PellError> {
        if !self.is_hyperbolic() {
            return Err(PellError::NotHyperbolic { d: self.d.clone() });
        }
        if self.n.is_zero() {
            return Err(PellError::ZeroRhs);
        }
        if self.n.is_odd() {
            return Err(PellError::OddRhs { n: self.n.clone() });
        }
        Ok(())
    }

    /// Ordinate bound for the representative search.
    pub fn rep_search_bound(&self) -> BigUint {
        let num = self.n.magnitude() * (self.trace.magnitude() + 2u32);
        let den = self.d.magnitude() * 2u32;
        let (q, r) = num.div_rem(&den);
        let ratio = if r.is_zero() { q } else { q + 1u32 };
        let mut root = ratio.sqrt();
        if &root * &root < ratio {
            root += 1u32;
        }
        root + 2u32
    }
}

impl fmt::Display for ConicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^2 - {} y^2 = {}", self.d, self.n)
    }
}

/// A point with `y ≥ 0` on some conic; only constructible through a checked path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConicPoint {
    x: BigInt,
    y: BigUint,
}

impl ConicPoint {
    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigUint {
        &self.y
    }

    /// `y = 0`: corresponds to `q = 0`, never a prime pair.
    pub fn is_degenerate(&self) -> bool {
        self.y.is_zero()
    }

    fn y_signed(&self) -> BigInt {
        BigInt::from_biguint(Sign::Plus, self.y.clone())
    }

    fn mirrored(&self) -> ConicPoint {
        ConicPoint { x: -&self.x, y: self.y.clone() }
    }

    fn key(&self) -> (BigUint, BigInt) {
        (self.y.clone(), self.x.clone())
    }
}

impl fmt::Display for ConicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// One representative per orbit, up to the sign of `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRepSet {
    pub spec: ConicSpec,
    pub reps: Vec<ConicPoint>,
}

impl OrbitRepSet {
    /// Representatives with `y = 0` (only when `N` is a perfect square).
    pub fn degenerate(&self) -> impl Iterator<Item = &ConicPoint> {
        self.reps.iter().filter(|p| p.is_degenerate())
    }

    /// Every point with `0 ≤ y ≤ y_bound`, both signs of `x`, sorted by `(y, x)`.
    pub fn points_up_to(&self, y_bound: &BigUint) -> Vec<ConicPoint> {
        let bound = BigInt::from(y_bound.clone());
        let mut seen: BTreeSet<(BigUint, BigInt)> = BTreeSet::new();
        let mut push = |p: &ConicPoint| {
            seen.insert(p.key());
            seen.insert(p.mirrored().key());
        };
        for rep in &self.reps {
            if rep.y_signed() > bound {
                continue;
            }
            push(rep);
            // y along an orbit is a·λ^k + b·λ^(-k), so the steps with |y| <= bound are
            // contiguous; past y = 0 the orbit continues as the negation of a y > 0 orbit
            for forward in [true, false] {
                let (mut x, mut y) = (rep.x.clone(), rep.y_signed());
                loop {
                    let (nx, ny) = self.spec.step(&x, &y, forward).expect("even N keeps steps integral");
                    if ny.magnitude() > y_bound {
                        break;
                    }
                    let p = if ny.is_negative() {
                        self.spec.checked(-&nx, -&ny)
                    } else {
                        self.spec.checked(nx.clone(), ny.clone())
                    };
                    push(&p.expect("automorph preserves the conic"));
                    x = nx;
                    y = ny;
                }
            }
        }
        seen.into_iter().map(|(y, x)| ConicPoint { x, y }).collect()
    }
}

/// Lowest point of the orbit through `(x, y)`, with `x` made nonnegative.
fn orbit_minimum(spec: &ConicSpec, mut x: BigInt, mut y: BigInt) -> ConicPoint {
    loop {
        let mut moved = false;
        for forward in [false, true] {
            let (nx, ny) = spec.step(&x, &y, forward).expect("even N keeps steps integral");
            if !ny.is_negative() && ny < y {
                x = nx;
                y = ny;
                moved = true;
                break;
            }
        }
        if !moved {
            break;
        }
    }
    spec.checked(x.abs(), y).expect("reduction stays on the conic")
}

/// Finite complete set of orbit representatives for a hyperbolic conic.
pub fn orbit_reps(spec: &ConicSpec) -> Result<OrbitRepSet, PellError> {
    spec.require_orbit_preconditions()?;
    let bound = spec.rep_search_bound();
    let y_max = match bound.to_u64() {
        Some(v) if v <= REP_SEARCH_LIMIT => v,
        _ => return Err(PellError::SearchTooLarge { needed: bound, limit: REP_SEARCH_LIMIT }),
    };
    let mut reps: BTreeSet<(BigUint, BigInt)> = BTreeSet::new();
    // t = N + D y², advanced incrementally
    let mut t = spec.n.clone();
    for y in 0..=y_max {
        if !t.is_negative() && could_be_square(&t) {
            let x = t.sqrt();
            if &x * &x == t {
                let rep = orbit_minimum(spec, x, BigInt::from(y));
                reps.insert(rep.key());
            }
        }
        t += &spec.d * (2 * y + 1);
    }
    Ok(OrbitRepSet {
        spec: spec.clone(),
        reps: reps.into_iter().map(|(y, x)| ConicPoint { x, y }).collect(),
    })
}

/// Cheap filter: squares are 0, 1, 4 or 9 mod 16.
fn could_be_square(t: &BigInt) -> bool {
    let low = t.iter_u32_digits().next().unwrap_or(0) & 15;
    matches!(low, 0 | 1 | 4 | 9)
}

/// The first `count` forward iterates of `rep` under the automorph.
pub fn orbit_walk(rep: &ConicPoint, spec: &ConicSpec, count: usize) -> Result<Vec<ConicPoint>, PellError> {
    let (mut x, mut y) = (rep.x.clone(), rep.y_signed());
    if !spec.contains(&x, &y) {
        return Err(PellError::NotOnConic { x, y, conic: Box::new(spec.clone()) });
    }
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let (nx, ny) = spec.step(&x, &y, true)?;
        out.push(spec.checked(nx.clone(), ny.clone())?);
        x = nx;
        y = ny;
    }
    Ok(out)
}

/// One inverse automorph step.
pub fn orbit_step_back(point: &ConicPoint, spec: &ConicSpec) -> Result<ConicPoint, PellError> {
    let (x, y) = spec.step(&point.x, &point.y_signed(), false)?;
    spec.checked(x, y)
}

/// Right-hand side of the golden-ratio conic `x² − 5y² = ±4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FibConicSign {
    /// `x² − 5y² = −4`, points `(L(2k+1), F(2k+1))`.
    Minus4,
    /// `x² − 5y² = +4`, points `(L(2k), F(2k))`, `k ≥ 1`.
    Plus4,
}

impl FibConicSign {
    pub fn rhs(self) -> i32 {
        match self {
            FibConicSign::Minus4 => -4,
            FibConicSign::Plus4 => 4,
        }
    }

    pub fn from_rhs(rhs: i64) -> Option<Self> {
        match rhs {
            -4 => Some(FibConicSign::Minus4),
            4 => Some(FibConicSign::Plus4),
            _ => None,
        }
    }
}

/// All points of `x² − 5y² = ±4` with `x > 0` and `1 ≤ y ≤ y_bound`, by
/// walking from the smallest one.
pub fn solve_fib_conic(sign: FibConicSign, y_bound: &BigUint) -> Vec<ConicPoint> {
    let spec = ConicSpec::from_trace(BigInt::from(3), BigInt::from(sign.rhs()));
    let start = match sign {
        FibConicSign::Minus4 => (BigInt::one(), BigUint::one()),
        FibConicSign::Plus4 => (BigInt::from(3), BigUint::one()),
    };
    let mut out = Vec::new();
    if &start.1 > y_bound {
        return out;
    }
    let mut current = spec.point(start.0, start.1).expect("fundamental point lies on the conic");
    loop {
        out.push(current.clone());
        let next = orbit_walk(&current, &spec, 1).expect("walk from a positive point stays valid");
        let next = next.into_iter().next().expect("one step requested");
        if next.y() > y_bound {
            break;
        }
        current = next;
    }
    out
}
