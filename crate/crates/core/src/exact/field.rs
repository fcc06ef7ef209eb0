//! Exact coefficient fields.
//!
//! A [`Field`] value is a *context*: it carries the runtime parameters of the
//! field (the prime `q`, the conductor `N`) and performs arithmetic on plain
//! element values. Elements never carry their field with them, so matrices
//! over a field are just `Vec`s of elements plus a borrowed context.

use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arithmetic context for an exact field.
pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn characteristic(&self) -> u64;
    /// A primitive `n`-th root of unity, if the field contains one.
    fn root_of_unity(&self, n: u64) -> Option<Self::Elem>;
    /// Exact textual form (rationals as `a/b`, cyclotomic elements in `z`).
    fn format(&self, a: &Self::Elem) -> String;
    /// Short name such as `Q`, `F_13` or `Q(zeta_5)`.
    fn name(&self) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn from_rational(&self, num: i64, den: i64) -> Option<Self::Elem> {
        self.div(&self.from_i64(num), &self.from_i64(den))
    }
}

// ---------------------------------------------------------------------------
// Rationals

/// The field of rational numbers with arbitrary-precision numerators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn root_of_unity(&self, n: u64) -> Option<BigRational> {
        match n {
            1 => Some(self.one()),
            2 => Some(self.from_i64(-1)),
            _ => None,
        }
    }
    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn name(&self) -> String {
        "Q".to_string()
    }
}

// ---------------------------------------------------------------------------
// Prime fields

/// The prime field `F_q`. Representatives live in `[0, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    /// Returns `None` unless `q` is prime and below `2^62`.
    pub fn new(q: u64) -> Option<Self> {
        (q < (1 << 62) && is_prime(q)).then_some(Self { q })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    fn reduce_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.q as i64) as u64
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive_root(&self) -> u64 {
        if self.q == 2 {
            return 1;
        }
        let factors = distinct_prime_factors(self.q - 1);
        (2..self.q)
            .find(|&g| factors.iter().all(|&f| self.pow(&g, (self.q - 1) / f) != 1))
            .expect("every prime field has a primitive root")
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.q
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i64(n)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.q - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.q as u128) as u64
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        let (g, x, _) = ext_gcd(*a as i128, self.q as i128);
        debug_assert_eq!(g, 1);
        Some(x.rem_euclid(self.q as i128) as u64)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn characteristic(&self) -> u64 {
        self.q
    }
    fn root_of_unity(&self, n: u64) -> Option<u64> {
        if n == 0 || !(self.q - 1).is_multiple_of(n) {
            return None;
        }
        Some(self.pow(&self.primitive_root(), (self.q - 1) / n))
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn name(&self) -> String {
        format!("F_{}", self.q)
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// ---------------------------------------------------------------------------
// Cyclotomic fields

/// Element of `Q(zeta_N)`: coefficients of the reduced representative
/// `c_0 + c_1 z + ... + c_{phi(N)-1} z^{phi(N)-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloElem(pub Vec<BigRational>);

/// The cyclotomic field `Q(zeta_N) = Q[z] / Phi_N(z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclotomic {
    conductor: u64,
    /// Monic `Phi_N`, lowest degree first.
    modulus: Arc<Vec<BigInt>>,
}

impl Cyclotomic {
    /// Panics if `n == 0`.
    pub fn new(n: u64) -> Self {
        assert!(n > 0, "cyclotomic conductor must be positive");
        Self {
            conductor: n,
            modulus: Arc::new(cyclotomic_polynomial(n)),
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// `phi(N)`, the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    /// The generator `zeta_N`.
    pub fn zeta(&self) -> CycloElem {
        self.zeta_pow(1)
    }

    /// `zeta_N^k` for any integer `k`.
    pub fn zeta_pow(&self, k: i64) -> CycloElem {
        let e = k.rem_euclid(self.conductor as i64) as usize;
        let mut coeffs = vec![BigRational::zero(); e + 1];
        coeffs[e] = BigRational::one();
        self.reduce(coeffs)
    }

    /// Embeds a rational number.
    pub fn from_rational(&self, r: BigRational) -> CycloElem {
        let mut v = vec![BigRational::zero(); self.degree()];
        v[0] = r;
        CycloElem(v)
    }

    /// Reduces an arbitrary polynomial in `z` modulo `Phi_N`.
    pub fn reduce(&self, mut coeffs: Vec<BigRational>) -> CycloElem {
        let deg = self.degree();
        let n = self.conductor as usize;
        if coeffs.len() > n {
            // z^N = 1
            for k in n..coeffs.len() {
                let c = std::mem::take(&mut coeffs[k]);
                if !c.is_zero() {
                    coeffs[k % n] += c;
                }
            }
            coeffs.truncate(n);
        }
        for k in (deg..coeffs.len()).rev() {
            let c = std::mem::take(&mut coeffs[k]);
            if c.is_zero() {
                continue;
            }
            for (i, m) in self.modulus[..deg].iter().enumerate() {
                if !m.is_zero() {
                    coeffs[k - deg + i] -= &c * BigRational::from_integer(m.clone());
                }
            }
        }
        coeffs.resize(deg, BigRational::zero());
        CycloElem(coeffs)
    }
}

impl Field for Cyclotomic {
    type Elem = CycloElem;

    fn zero(&self) -> CycloElem {
        CycloElem(vec![BigRational::zero(); self.degree()])
    }
    fn one(&self) -> CycloElem {
        self.from_i64(1)
    }
    fn from_i64(&self, n: i64) -> CycloElem {
        self.from_rational(BigRational::from_integer(BigInt::from(n)))
    }
    fn add(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        CycloElem(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }
    fn sub(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        CycloElem(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }
    fn neg(&self, a: &CycloElem) -> CycloElem {
        CycloElem(a.0.iter().map(|x| -x).collect())
    }
    fn mul(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        let deg = self.degree();
        if deg == 1 {
            return CycloElem(vec![&a.0[0] * &b.0[0]]);
        }
        let mut prod = vec![BigRational::zero(); 2 * deg - 1];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        self.reduce(prod)
    }
    fn inv(&self, a: &CycloElem) -> Option<CycloElem> {
        if self.is_zero(a) {
            return None;
        }
        // Extended Euclid in Q[z]: s*a + t*Phi = 1.
        let modulus: Vec<BigRational> = self
            .modulus
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let (g, s) = poly_ext_gcd(trim(a.0.clone()), modulus);
        debug_assert_eq!(g.len(), 1, "Phi_N is irreducible");
        let scale = g[0].recip();
        let s: Vec<BigRational> = s.into_iter().map(|c| c * &scale).collect();
        Some(self.reduce(s))
    }
    fn is_zero(&self, a: &CycloElem) -> bool {
        a.0.iter().all(Zero::is_zero)
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn root_of_unity(&self, n: u64) -> Option<CycloElem> {
        if n == 0 {
            return None;
        }
        // The roots of unity in Q(zeta_N) form a cyclic group of order lcm(2, N).
        let (omega, order) = if self.conductor % 2 == 1 {
            (self.neg(&self.zeta()), 2 * self.conductor)
        } else {
            (self.zeta(), self.conductor)
        };
        (order % n == 0).then(|| self.pow(&omega, order / n))
    }
    fn format(&self, a: &CycloElem) -> String {
        let mut parts = Vec::new();
        for (k, c) in a.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let var = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            let term = if k == 0 {
                c.abs().to_string()
            } else if c.abs().is_one() {
                var
            } else {
                format!("{}*{}", c.abs(), var)
            };
            let sign = if c.is_negative() { "-" } else { "+" };
            parts.push((sign, term));
        }
        if parts.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (sign, term)) in parts.into_iter().enumerate() {
            if i == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        out
    }
    fn name(&self) -> String {
        format!("Q(zeta_{})", self.conductor)
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

/// Polynomial division over Q, returns (quotient, remainder).
fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    if r.len() <= db {
        return (vec![BigRational::zero()], r);
    }
    let lead_inv = b[db].recip();
    let mut q = vec![BigRational::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = &r[k + db] * &lead_inv;
        if !c.is_zero() {
            for (i, bi) in b.iter().enumerate() {
                r[k + i] -= &c * bi;
            }
        }
        q[k] = c;
    }
    r.truncate(db.max(1));
    (trim(q), trim(r))
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

/// Returns `(g, s)` with `s*a ≡ g (mod m)`, `g = gcd(a, m)`.
fn poly_ext_gcd(a: Vec<BigRational>, m: Vec<BigRational>) -> (Vec<BigRational>, Vec<BigRational>) {
    let (mut r0, mut r1) = (m, a);
    let (mut s0, mut s1) = (vec![BigRational::zero()], vec![BigRational::one()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divmod(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    (r0, s0)
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let den = cyclotomic_polynomial(d);
            num = int_poly_exact_div(&num, &den);
        }
    }
    num
}

fn int_poly_exact_div(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    // b is monic
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].clone();
        if !c.is_zero() {
            for (i, bi) in b.iter().enumerate() {
                r[k + i] -= &c * bi;
            }
        }
        q[k] = c;
    }
    debug_assert!(r.iter().all(Zero::is_zero));
    q
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    distinct_prime_factors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1))
}

/// Least common multiple of denominators of a rational vector.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Converts a small rational into `(num, den)` if both fit in `i64`.
pub fn rational_parts(x: &BigRational) -> Option<(i64, i64)> {
    Some((x.numer().to_i64()?, x.denom().to_i64()?))
}
