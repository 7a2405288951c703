use super::error::AlgebraError;
use super::poly::Poly;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Default cap on the field size accepted by [`make_field`].
pub const DEFAULT_FIELD_CAP: u64 = 1 << 16;

/// Element of a finite field, encoded as the base-p integer whose digits are
/// the coefficients of the element written as a polynomial in the generator `g`
/// (digit i is the coefficient of g^i).
pub type Elem = u32;

struct FieldData {
    p: u32,
    s: u32,
    q: u32,
    /// Monic defining polynomial over F_p, low to high, length s+1.
    modulus: Vec<u32>,
    exp: Vec<Elem>,
    log: Vec<u32>,
}

/// The finite field F_q, q = p^s, with a fixed modulus and log tables.
///
/// Cheap to clone (shared tables). Equality is by (p, s); the modulus is a
/// deterministic function of the pair.
#[derive(Clone)]
pub struct FieldDescriptor(Arc<FieldData>);

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.s == other.0.s
    }
}
impl Eq for FieldDescriptor {}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn cache() -> &'static Mutex<HashMap<(u32, u32), FieldDescriptor>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), FieldDescriptor>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds F_{p^s} with the lexicographically least monic irreducible modulus.
pub fn make_field(p: u32, s: u32) -> Result<FieldDescriptor, AlgebraError> {
    make_field_capped(p, s, DEFAULT_FIELD_CAP)
}

/// As [`make_field`] with an explicit size cap.
pub fn make_field_capped(p: u32, s: u32, cap: u64) -> Result<FieldDescriptor, AlgebraError> {
    if !is_prime(p as u64) {
        return Err(AlgebraError::NotPrime(p));
    }
    if s == 0 {
        return Err(AlgebraError::CapExceeded { p, s, cap });
    }
    let size = (p as u64).checked_pow(s).filter(|&n| n <= cap && n <= u32::MAX as u64);
    let Some(size) = size else {
        return Err(AlgebraError::CapExceeded { p, s, cap });
    };
    let cached = cache().lock().unwrap().get(&(p, s)).cloned();
    if let Some(f) = cached {
        return Ok(f);
    }
    let modulus = if s == 1 { vec![0, 1] } else { least_irreducible(p, s)? };
    let f = build(p, s, size as u32, modulus);
    cache().lock().unwrap().insert((p, s), f.clone());
    Ok(f)
}

fn least_irreducible(p: u32, s: u32) -> Result<Vec<u32>, AlgebraError> {
    let fp = make_field(p, 1)?;
    let count = (p as u64).pow(s);
    for k in 0..count {
        let mut coeffs = Vec::with_capacity(s as usize + 1);
        let mut r = k;
        for _ in 0..s {
            coeffs.push((r % p as u64) as u32);
            r /= p as u64;
        }
        coeffs.push(1);
        let f = Poly::from_coeffs(&fp, coeffs.clone());
        if f.is_irreducible() {
            return Ok(coeffs);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn digits(a: u32, p: u32, s: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(s as usize);
    let mut r = a;
    for _ in 0..s {
        out.push(r % p);
        r /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Multiplication without tables, used while building them.
fn raw_mul(a: u32, b: u32, p: u32, s: u32, modulus: &[u32]) -> u32 {
    let da = digits(a, p, s);
    let db = digits(b, p, s);
    let n = s as usize;
    let mut prod = vec![0u64; 2 * n];
    for i in 0..n {
        if da[i] == 0 {
            continue;
        }
        for j in 0..n {
            prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p as u64;
        }
    }
    for k in (n..2 * n).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for i in 0..n {
            let sub = c * modulus[i] as u64 % p as u64;
            prod[k - n + i] = (prod[k - n + i] + p as u64 - sub) % p as u64;
        }
    }
    let low: Vec<u32> = prod[..n].iter().map(|&x| x as u32).collect();
    undigits(&low, p)
}

fn raw_pow(a: u32, mut e: u64, p: u32, s: u32, modulus: &[u32]) -> u32 {
    let mut base = a;
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = raw_mul(acc, base, p, s, modulus);
        }
        base = raw_mul(base, base, p, s, modulus);
        e >>= 1;
    }
    acc
}

fn build(p: u32, s: u32, q: u32, modulus: Vec<u32>) -> FieldDescriptor {
    let order = (q - 1) as u64;
    let factors = prime_factors(order);
    let gen = (1..q)
        .find(|&g| factors.iter().all(|&r| raw_pow(g, order / r, p, s, &modulus) != 1))
        .expect("multiplicative group is cyclic");
    let mut exp = vec![0u32; (q - 1) as usize];
    let mut log = vec![0u32; q as usize];
    let mut x = 1u32;
    for k in 0..(q - 1) {
        exp[k as usize] = x;
        log[x as usize] = k;
        x = raw_mul(x, gen, p, s, &modulus);
    }
    FieldDescriptor(Arc::new(FieldData { p, s, q, modulus, exp, log }))
}

impl FieldDescriptor {
    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn s(&self) -> u32 {
        self.0.s
    }
    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }
    pub fn is_prime_field(&self) -> bool {
        self.0.s == 1
    }

    pub fn zero(&self) -> Elem {
        0
    }
    pub fn one(&self) -> Elem {
        1
    }
    /// The multiplicative generator used for the log tables.
    pub fn primitive(&self) -> Elem {
        if self.0.q == 2 {
            1
        } else {
            self.0.exp[1]
        }
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.0.p as i64) as Elem
    }

    /// The generator g of F_q over F_p (g = 0 for prime fields, whose modulus is x).
    pub fn generator(&self) -> Elem {
        if self.0.s == 1 {
            0
        } else {
            self.0.p
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.0.q
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            return a ^ b;
        }
        if self.0.s == 1 {
            return (a + b) % p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut w = 1;
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * w;
            a /= p;
            b /= p;
            w *= p;
        }
        out
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0;
        let mut w = 1;
        while a > 0 {
            out += ((p - a % p) % p) * w;
            a /= p;
            w *= p;
        }
        out
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.0.q - 1;
        let k = (self.0.log[a as usize] as u64 + self.0.log[b as usize] as u64) % n as u64;
        self.0.exp[k as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        let n = self.0.q - 1;
        let k = (n - self.0.log[a as usize]) % n;
        Some(self.0.exp[k as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.0.q - 1) as u64;
        let k = (self.0.log[a as usize] as u64 % n) * (e % n) % n;
        self.0.exp[k as usize]
    }

    /// Discrete log with respect to [`FieldDescriptor::primitive`].
    pub fn log(&self, a: Elem) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.0.log[a as usize])
        }
    }

    pub fn exp(&self, k: u64) -> Elem {
        self.0.exp[(k % (self.0.q as u64 - 1)) as usize]
    }

    /// x ↦ x^{p^k}.
    pub fn frobenius(&self, a: Elem, k: u32) -> Elem {
        let e = (self.0.p as u64).pow(k % self.0.s);
        self.pow(a, e)
    }

    /// Inverse of x ↦ x^{p^k}.
    pub fn frobenius_inv(&self, a: Elem, k: u32) -> Elem {
        let s = self.0.s;
        self.frobenius(a, (s - k % s) % s)
    }

    /// Formats an element: an integer for prime fields, else a polynomial in `g`.
    pub fn format_elem(&self, a: Elem) -> String {
        if self.0.s == 1 {
            return a.to_string();
        }
        let d = digits(a, self.0.p, self.0.s);
        let mut parts = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coeff = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            let mono = match i {
                0 => String::new(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            };
            parts.push(format!("{coeff}{mono}"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }

    /// Parses an element written in the syntax of [`FieldDescriptor::format_elem`].
    pub fn parse_elem(&self, text: &str) -> Result<Elem, AlgebraError> {
        let r = super::parse::parse_expr(self, text)?;
        r.as_constant().ok_or_else(|| AlgebraError::Parse {
            pos: 0,
            msg: format!("'{text}' is not a field constant"),
        })
    }

    /// Maps this field into `big` (requires the same characteristic and s | big.s).
    ///
    /// The generator goes to the least root of this field's modulus in `big`.
    pub fn embedding_into(&self, big: &FieldDescriptor) -> Option<Vec<Elem>> {
        if self.0.p != big.0.p || big.0.s % self.0.s != 0 {
            return None;
        }
        let p = self.0.p;
        let m = &self.0.modulus;
        let eval = |x: Elem| -> Elem {
            m.iter().rev().fold(0, |acc, &c| big.add(big.mul(acc, x), c))
        };
        let root = if self.0.s == 1 { 0 } else { big.elements().find(|&x| eval(x) == 0)? };
        let mut table = Vec::with_capacity(self.0.q as usize);
        for a in self.elements() {
            let d = digits(a, p, self.0.s);
            let img = d.iter().rev().fold(0, |acc, &c| big.add(big.mul(acc, root), c));
            table.push(img);
        }
        Some(table)
    }
}
