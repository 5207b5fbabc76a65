//! Exact arithmetic in the prime field `F_q` and its quadratic extension
//! `F_{q^2} = F_q[ω]` with `ω^2 = r`.
//!
//! `r` is always the smallest quadratic non-residue of `F_q`, so every
//! element, basis and report built on top of a [`FieldParams`] is
//! reproducible. Elements carry their parameters, which keeps the operator
//! syntax natural at the cost of eight bytes per element.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Largest supported characteristic.
pub const MAX_Q: u32 = 1 << 15;

/// Parameters of the field pair `F_q ⊂ F_{q^2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldParams {
    q: u32,
    r: u32,
}

impl FieldParams {
    /// Builds the field for an odd prime `q`, picking the smallest non-residue as `ω^2`.
    pub fn new(q: u32) -> Result<Self> {
        if q < 3 || q.is_multiple_of(2) || q > MAX_Q || !is_prime(q) {
            return Err(Error::NotOddPrime(q));
        }
        let squares: Vec<bool> = {
            let mut s = vec![false; q as usize];
            for x in 0..q as u64 {
                s[((x * x) % q as u64) as usize] = true;
            }
            s
        };
        let r = (1..q).find(|&x| !squares[x as usize]).expect("odd prime has non-residues");
        Ok(Self { q, r })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// The base-field value of `ω^2`.
    pub fn r(&self) -> u32 {
        self.r
    }

    /// Number of elements of `F_{q^2}`.
    pub fn size(&self) -> usize {
        (self.q as usize) * (self.q as usize)
    }

    pub fn fq(&self, value: u64) -> Fq {
        Fq { value: (value % self.q as u64) as u32, field: *self }
    }

    /// `a0 + a1·ω`, reducing both components.
    pub fn elem(&self, a0: i64, a1: i64) -> Fq2 {
        let q = self.q as i64;
        Fq2 { a0: a0.rem_euclid(q) as u32, a1: a1.rem_euclid(q) as u32, field: *self }
    }

    /// Like [`elem`](Self::elem) but rejects components outside `[0, q)`.
    pub fn elem_checked(&self, a0: u32, a1: u32) -> Result<Fq2> {
        if a0 >= self.q || a1 >= self.q {
            return Err(Error::Malformed(format!(
                "field element [{a0}, {a1}] has a component outside [0, {})",
                self.q
            )));
        }
        Ok(Fq2 { a0, a1, field: *self })
    }

    pub fn zero(&self) -> Fq2 {
        self.elem(0, 0)
    }

    pub fn one(&self) -> Fq2 {
        self.elem(1, 0)
    }

    pub fn omega(&self) -> Fq2 {
        self.elem(0, 1)
    }

    /// The element with position `index` in the global order (lexicographic in `(a0, a1)`).
    pub fn from_index(&self, index: usize) -> Fq2 {
        let q = self.q as usize;
        debug_assert!(index < q * q);
        Fq2 { a0: (index / q) as u32, a1: (index % q) as u32, field: *self }
    }

    /// All elements of `F_{q^2}` in lexicographic `(a0, a1)` order.
    pub fn elements(&self) -> impl Iterator<Item = Fq2> + Clone + '_ {
        (0..self.size()).map(move |i| self.from_index(i))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fq2> + Clone + '_ {
        (1..self.size()).map(move |i| self.from_index(i))
    }

    /// The trace-zero unit used as `α` throughout; it is `ω`.
    pub fn trace_zero_unit(&self) -> Fq2 {
        self.omega()
    }

    /// Smallest non-square of `F_{q^2}` in lexicographic order.
    pub fn smallest_non_square(&self) -> Fq2 {
        self.nonzero_elements()
            .find(|x| !x.is_square().expect("nonzero"))
            .expect("F_{q^2} has non-squares")
    }

    /// Smallest `x` (lexicographically) with `N(x) = c`.
    pub fn solve_norm(&self, c: Fq) -> Result<Fq2> {
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let r_inv = self.fq(self.r as u64).inv()?;
        for a0 in 0..self.q {
            let x0 = self.fq(a0 as u64);
            // a0^2 - r a1^2 = c  <=>  a1^2 = (a0^2 - c) / r
            let rhs = (x0 * x0 - c) * r_inv;
            if let Some(root) = rhs.sqrt() {
                let a1 = root.value.min((self.q - root.value) % self.q);
                return Ok(Fq2 { a0, a1, field: *self });
            }
        }
        Err(Error::NoSolution)
    }

    /// Inverse of 2 in `F_q`.
    pub fn half(&self) -> Fq {
        self.fq(self.q.div_ceil(2) as u64)
    }

    /// Whether `-1` is a square in `F_q`.
    pub fn minus_one_is_square(&self) -> bool {
        self.q % 4 == 1
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Element of `F_q`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq {
    value: u32,
    field: FieldParams,
}

impl Fq {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> FieldParams {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut e: u64) -> Fq {
        let q = self.field.q as u64;
        let mut base = self.value as u64;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % q;
            }
            base = base * base % q;
            e >>= 1;
        }
        self.field.fq(acc)
    }

    pub fn inv(self) -> Result<Fq> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.field.q as u64 - 2))
    }

    /// Euler's criterion; zero counts as a square.
    pub fn is_square(self) -> bool {
        self.is_zero() || self.pow((self.field.q as u64 - 1) / 2).value == 1
    }

    /// A square root via Tonelli-Shanks, or `None` for non-residues.
    pub fn sqrt(self) -> Option<Fq> {
        if self.is_zero() {
            return Some(self);
        }
        if !self.is_square() {
            return None;
        }
        let q = self.field.q as u64;
        let mut s = 0;
        let mut t = q - 1;
        while t.is_multiple_of(2) {
            t /= 2;
            s += 1;
        }
        let z = self.field.fq(self.field.r as u64);
        let mut m = s;
        let mut c = z.pow(t);
        let mut x = self.pow(t.div_ceil(2));
        let mut b = self.pow(t);
        while b.value != 1 {
            let mut i = 0;
            let mut b2 = b;
            while b2.value != 1 {
                b2 = b2 * b2;
                i += 1;
            }
            let g = c.pow(1u64 << (m - i - 1));
            x = x * g;
            c = g * g;
            b = b * c;
            m = i;
        }
        Some(x)
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fq {
    type Output = Fq;
    fn add(self, rhs: Fq) -> Fq {
        self.field.fq(self.value as u64 + rhs.value as u64)
    }
}

impl Sub for Fq {
    type Output = Fq;
    fn sub(self, rhs: Fq) -> Fq {
        self.field.fq(self.value as u64 + (self.field.q - rhs.value) as u64)
    }
}

impl Mul for Fq {
    type Output = Fq;
    fn mul(self, rhs: Fq) -> Fq {
        self.field.fq(self.value as u64 * rhs.value as u64)
    }
}

impl Neg for Fq {
    type Output = Fq;
    fn neg(self) -> Fq {
        self.field.fq((self.field.q - self.value) as u64)
    }
}

/// Element `a0 + a1·ω` of `F_{q^2}`.
///
/// The derived ordering is lexicographic in `(a0, a1)`, which is the order
/// every "smallest element such that ..." choice in this crate refers to.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq2 {
    a0: u32,
    a1: u32,
    field: FieldParams,
}

impl Fq2 {
    pub fn a0(&self) -> u32 {
        self.a0
    }

    pub fn a1(&self) -> u32 {
        self.a1
    }

    pub fn components(&self) -> [u32; 2] {
        [self.a0, self.a1]
    }

    pub fn field(&self) -> FieldParams {
        self.field
    }

    /// Position in the global lexicographic order.
    pub fn index(&self) -> usize {
        self.a0 as usize * self.field.q as usize + self.a1 as usize
    }

    pub fn is_zero(&self) -> bool {
        self.a0 == 0 && self.a1 == 0
    }

    pub fn is_one(&self) -> bool {
        self.a0 == 1 && self.a1 == 0
    }

    /// Whether the element lies in the fixed field `F_q`.
    pub fn is_base(&self) -> bool {
        self.a1 == 0
    }

    /// Projects onto `F_q`; only meaningful when [`is_base`](Self::is_base) holds.
    pub fn to_base(&self) -> Option<Fq> {
        self.is_base().then(|| self.field.fq(self.a0 as u64))
    }

    /// `σ(a) = a^q = a0 - a1·ω`.
    pub fn frobenius(self) -> Fq2 {
        Fq2 { a0: self.a0, a1: (self.field.q - self.a1) % self.field.q, field: self.field }
    }

    /// `a·σ(a) = a0^2 - r·a1^2`.
    pub fn norm(self) -> Fq {
        let f = self.field;
        let a0 = f.fq(self.a0 as u64);
        let a1 = f.fq(self.a1 as u64);
        a0 * a0 - f.fq(f.r as u64) * a1 * a1
    }

    /// `a + σ(a) = 2·a0`.
    pub fn trace(self) -> Fq {
        self.field.fq(2 * self.a0 as u64)
    }

    pub fn pow(self, mut e: u64) -> Fq2 {
        let mut base = self;
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    pub fn inv(self) -> Result<Fq2> {
        let n_inv = self.norm().inv()?;
        Ok(self.frobenius() * Fq2::from(n_inv))
    }

    /// Quadratic character: `a^{(q^2-1)/2} = 1`.
    pub fn is_square(self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroHasNoType);
        }
        let q = self.field.q as u64;
        Ok(self.pow((q * q - 1) / 2).is_one())
    }

    /// The lexicographically smaller of the two square roots.
    pub fn sqrt(self) -> Result<Fq2> {
        if self.is_zero() {
            return Ok(self);
        }
        if !self.is_square()? {
            return Err(Error::NotASquare);
        }
        let f = self.field;
        let root = if self.a1 == 0 {
            let a = f.fq(self.a0 as u64);
            match a.sqrt() {
                Some(x) => Fq2::from(x),
                None => {
                    // a = r·y^2 with y in F_q, so the root is y·ω.
                    let y = (a * f.fq(f.r as u64).inv()?).sqrt().ok_or(Error::NotASquare)?;
                    Fq2::from(y) * f.omega()
                }
            }
        } else {
            // With x = x0 + x1ω: a0 = x0^2 + r x1^2 and N(x) = x0^2 - r x1^2 = ±sqrt(N(a)).
            let a0 = f.fq(self.a0 as u64);
            let a1 = f.fq(self.a1 as u64);
            let s = self.norm().sqrt().ok_or(Error::NotASquare)?;
            let mut found = None;
            for n in [s, -s] {
                if let Some(x0) = ((a0 + n) * f.half()).sqrt() {
                    if !x0.is_zero() {
                        let x1 = a1 * (f.fq(2) * x0).inv()?;
                        found = Some(Fq2 { a0: x0.value, a1: x1.value, field: f });
                        break;
                    }
                }
            }
            found.ok_or(Error::NotASquare)?
        };
        debug_assert_eq!(root * root, self);
        Ok(root.min(-root))
    }
}

impl From<Fq> for Fq2 {
    fn from(x: Fq) -> Fq2 {
        Fq2 { a0: x.value, a1: 0, field: x.field }
    }
}

impl fmt::Debug for Fq2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Fq2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a0, self.a1) {
            (a0, 0) => write!(f, "{a0}"),
            (0, 1) => write!(f, "ω"),
            (0, a1) => write!(f, "{a1}ω"),
            (a0, 1) => write!(f, "{a0}+ω"),
            (a0, a1) => write!(f, "{a0}+{a1}ω"),
        }
    }
}

impl Add for Fq2 {
    type Output = Fq2;
    fn add(self, rhs: Fq2) -> Fq2 {
        let q = self.field.q;
        Fq2 { a0: (self.a0 + rhs.a0) % q, a1: (self.a1 + rhs.a1) % q, field: self.field }
    }
}

impl Sub for Fq2 {
    type Output = Fq2;
    fn sub(self, rhs: Fq2) -> Fq2 {
        let q = self.field.q;
        Fq2 { a0: (self.a0 + q - rhs.a0) % q, a1: (self.a1 + q - rhs.a1) % q, field: self.field }
    }
}

impl Mul for Fq2 {
    type Output = Fq2;
    fn mul(self, rhs: Fq2) -> Fq2 {
        let q = self.field.q as u64;
        let (a0, a1) = (self.a0 as u64, self.a1 as u64);
        let (b0, b1) = (rhs.a0 as u64, rhs.a1 as u64);
        let c0 = (a0 * b0 + (a1 * b1 % q) * self.field.r as u64) % q;
        let c1 = (a0 * b1 + a1 * b0) % q;
        Fq2 { a0: c0 as u32, a1: c1 as u32, field: self.field }
    }
}

impl Neg for Fq2 {
    type Output = Fq2;
    fn neg(self) -> Fq2 {
        let q = self.field.q;
        Fq2 { a0: (q - self.a0) % q, a1: (q - self.a1) % q, field: self.field }
    }
}

impl AddAssign for Fq2 {
    fn add_assign(&mut self, rhs: Fq2) {
        *self = *self + rhs;
    }
}

impl SubAssign for Fq2 {
    fn sub_assign(&mut self, rhs: Fq2) {
        *self = *self - rhs;
    }
}

impl MulAssign for Fq2 {
    fn mul_assign(&mut self, rhs: Fq2) {
        *self = *self * rhs;
    }
}

impl serde::Serialize for Fq2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.a0, self.a1].serialize(s)
    }
}
