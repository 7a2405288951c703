//! Roots of residual polynomials over F_Q, and the extension degree needed
//! when some roots are missing.

use super::OracleError;
use crate::algebra::{make_field_capped, Elem, FieldDescriptor, Poly};

/// Field size cap for coefficient extensions (3^12 fits).
pub const EXTENSION_FIELD_CAP: u64 = 1 << 20;

/// Distinct roots in the coefficient field of `f` with multiplicities,
/// sorted by element encoding.
pub fn roots_in_field(f: &Poly) -> Vec<(Elem, u32)> {
    let field = f.field();
    if f.deg() == 0 {
        return Vec::new();
    }
    let x = Poly::x(field);
    let xq = x.powmod(field.q() as u64, f);
    let g = f.gcd(&xq.sub(&x));
    let mut roots = Vec::new();
    split_linear(&g, &mut roots);
    roots.sort_unstable();
    roots
        .into_iter()
        .map(|r| {
            let lin = Poly::linear(field, r);
            let mut m = 0;
            let mut h = f.clone();
            while let Some(qt) = h.div_exact(&lin) {
                h = qt;
                m += 1;
            }
            (r, m)
        })
        .collect()
}

/// Splits a monic product of distinct linear factors into its roots.
fn split_linear(g: &Poly, out: &mut Vec<Elem>) {
    let field = g.field();
    match g.deg() {
        0 => return,
        1 => {
            out.push(field.neg(g.monic().coeff(0)));
            return;
        }
        _ => {}
    }
    let q = field.q() as u64;
    let x = Poly::x(field);
    for a in field.elements() {
        let probe = if field.p() == 2 {
            // absolute trace of a·x
            let ax = x.scale(a).rem(g);
            let mut acc = ax.clone();
            let mut cur = ax;
            for _ in 1..(field.s()) {
                cur = cur.powmod(2, g);
                acc = acc.add(&cur);
            }
            acc
        } else {
            x.add(&Poly::constant(field, a)).powmod((q - 1) / 2, g).sub(&Poly::one(field))
        };
        let h = g.gcd(&probe);
        if h.deg() > 0 && h.deg() < g.deg() {
            split_linear(&h, out);
            split_linear(&g.div_exact(&h).expect("factor divides").monic(), out);
            return;
        }
    }
    // q ≤ 3 with all probes failing only happens for tiny g; fall back to search
    out.extend(field.elements().filter(|&r| g.eval(r) == 0));
}

/// Degree d ≥ 2 of the smallest irreducible factor of a root-free `h`.
fn smallest_factor_degree(h: &Poly) -> u32 {
    let field = h.field();
    let q = field.q() as u64;
    let x = Poly::x(field);
    let mut cur = x.clone();
    for d in 1..=h.deg() as u32 {
        cur = cur.powmod(q, h);
        if h.gcd(&cur.sub(&x)).deg() > 0 {
            return d;
        }
    }
    h.deg() as u32
}

/// Nonzero roots of `f` with multiplicities, or the extension degree (over
/// the current coefficient field) needed to see them all.
pub fn nonzero_roots_or_degree(f: &Poly) -> Result<Vec<(Elem, u32)>, u32> {
    let field = f.field();
    let mut h = f.clone();
    while h.coeff(0) == 0 && h.deg() > 0 {
        h = h.div_exact(&Poly::x(field)).expect("x divides");
    }
    let roots: Vec<(Elem, u32)> = roots_in_field(&h);
    let found: u32 = roots.iter().map(|r| r.1).sum();
    if found as usize == h.deg() {
        return Ok(roots);
    }
    let mut rest = h;
    for &(r, m) in &roots {
        let lin = Poly::linear(field, r);
        for _ in 0..m {
            rest = rest.div_exact(&lin).expect("root divides");
        }
    }
    Err(smallest_factor_degree(&rest))
}

/// All roots of `f` (over F_q) in the smallest extension F_{q^k} containing
/// them, k ≤ cap. Returns the extension field and the sorted distinct roots.
pub fn residual_roots(f: &Poly, cap: u32) -> Result<(FieldDescriptor, Vec<Elem>), OracleError> {
    let base = f.field().clone();
    let mut k = 1u32;
    loop {
        let field = make_field_capped(base.p(), base.s() * k, EXTENSION_FIELD_CAP)
            .map_err(|_| OracleError::ExtensionCapExceeded { needed: base.s() * k, cap })?;
        let table = base.embedding_into(&field).expect("subfield");
        let g = f.map_coeffs(&field, &table);
        match nonzero_roots_or_degree(&g) {
            Ok(r) => {
                let mut roots: Vec<Elem> = r.into_iter().map(|x| x.0).collect();
                if g.coeff(0) == 0 {
                    roots.push(0);
                }
                roots.sort_unstable();
                return Ok((field, roots));
            }
            Err(d) => {
                k *= d;
                if k > cap {
                    return Err(OracleError::ExtensionCapExceeded { needed: k, cap });
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;

    fn poly(f: &FieldDescriptor, c: &[i64]) -> Poly {
        Poly::from_coeffs(f, c.iter().map(|&x| f.from_int(x)).collect())
    }

    #[test]
    fn examples() {
        let f3 = make_field(3, 1).unwrap();
        // X³ − X
        let (fld, r) = residual_roots(&poly(&f3, &[0, -1, 0, 1]), 12).unwrap();
        assert_eq!((fld.q(), r), (3, vec![0, 1, 2]));
        let f2 = make_field(2, 1).unwrap();
        let (fld, r) = residual_roots(&poly(&f2, &[0, 1, 1]), 12).unwrap();
        assert_eq!((fld.q(), r), (2, vec![0, 1]));
        // X⁴ + X = X(X³ + 1): needs F_4
        let (fld, r) = residual_roots(&poly(&f2, &[0, 1, 0, 0, 1]), 12).unwrap();
        assert_eq!(fld.q(), 4);
        let brute: Vec<Elem> = fld.elements().filter(|&x| fld.add(fld.pow(x, 4), x) == 0).collect();
        assert_eq!(r, brute);
        assert_eq!(r.len(), 4);
    }

    #[test]
    fn multiplicities_and_cap() {
        let f3 = make_field(3, 1).unwrap();
        // (X − 1)³ (X + 1) = X⁴ + ... checked through the counts
        let p = poly(&f3, &[-1, 1]).pow(3).mul(&poly(&f3, &[1, 1]));
        assert_eq!(nonzero_roots_or_degree(&p), Ok(vec![(1, 3), (2, 1)]));
        // X² + 1 is irreducible over F_3
        assert_eq!(nonzero_roots_or_degree(&poly(&f3, &[1, 0, 1])), Err(2));
        // degree-13 irreducible factor exceeds the cap
        let f2 = make_field(2, 1).unwrap();
        let mut c = vec![0i64; 14];
        c[0] = 1;
        c[1] = 1;
        c[3] = 1;
        c[4] = 1;
        c[13] = 1; // x^13 + x^4 + x^3 + x + 1 is irreducible over F_2
        let g = poly(&f2, &c);
        assert!(g.is_irreducible());
        assert!(matches!(residual_roots(&g, 12), Err(OracleError::ExtensionCapExceeded { .. })));
    }

    #[test]
    fn agrees_with_search_in_extensions() {
        let f9 = make_field(3, 2).unwrap();
        for seed in 0..20u32 {
            let c: Vec<Elem> = (0..6).map(|i| (seed * 7 + i * 5 + i * i * seed) % 9).chain([1]).collect();
            let g = Poly::from_coeffs(&f9, c);
            let mut fast: Vec<Elem> = roots_in_field(&g).into_iter().map(|r| r.0).collect();
            fast.sort_unstable();
            let slow: Vec<Elem> = f9.elements().filter(|&x| g.eval(x) == 0).collect();
            assert_eq!(fast, slow);
        }
    }
}
