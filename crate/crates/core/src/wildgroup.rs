//! The wild ramification subgroup as block-unipotent matrices over F_q.
//!
//! Basis order is (ξ_{−n}, …, ξ_{−1}, ξ_n, …, ξ_1). Row r of a matrix holds
//! the image of the r-th basis vector: σ(e_r) = Σ_c M[r][c] e_c.

use crate::algebra::{Elem, FieldDescriptor};
use crate::valtower::TowerCase;
use std::collections::{HashSet, VecDeque};
use std::fmt;
use thiserror::Error;

pub use crate::herbrand::filtration_break;

pub const DEFAULT_GROUP_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WildGroupError {
    #[error("level {l} outside 1..={n}")]
    LevelOutOfRange { l: u32, n: u32 },
    #[error("group of order {order} exceeds the enumeration cap {cap}")]
    CapExceeded { order: u128, cap: u64 },
    #[error("{0} is not a wild case")]
    NotWildCase(TowerCase),
}

/// σ_{l,u}: ξ_i ↦ ξ_i + u·ξ_{−(i−l+1)} for i ≥ l, everything else fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WildGenerator {
    pub l: u32,
    pub u: Elem,
}

/// Square matrix over F_q, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BlockUnipotentMatrix {
    size: usize,
    entries: Vec<Elem>,
}

impl fmt::Debug for BlockUnipotentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[Elem]> = self.entries.chunks(self.size).collect();
        write!(f, "{rows:?}")
    }
}

impl BlockUnipotentMatrix {
    pub fn identity(size: usize) -> Self {
        let mut entries = vec![0; size * size];
        for i in 0..size {
            entries[i * size + i] = 1;
        }
        Self { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.entries[r * self.size + c]
    }
    fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.entries[r * self.size + c] = v;
    }

    pub fn mul(&self, o: &Self, f: &FieldDescriptor) -> Self {
        assert_eq!(self.size, o.size);
        let n = self.size;
        let mut out = Self { size: n, entries: vec![0; n * n] };
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..n {
                    let b = o.get(k, c);
                    if b != 0 {
                        let v = f.add(out.get(r, c), f.mul(a, b));
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u64, f: &FieldDescriptor) -> Self {
        let mut acc = Self::identity(self.size);
        for _ in 0..e {
            acc = acc.mul(self, f);
        }
        acc
    }

    /// The lower-left n×n block L.
    pub fn lower_block(&self) -> Vec<Vec<Elem>> {
        let n = self.size / 2;
        (0..n).map(|r| (0..n).map(|c| self.get(n + r, c)).collect()).collect()
    }

    /// [[I, 0], [L, I]] shape.
    pub fn is_block_unipotent(&self) -> bool {
        let n = self.size / 2;
        (0..self.size).all(|r| {
            (0..self.size).all(|c| {
                let v = self.get(r, c);
                if r == c {
                    v == 1
                } else if r >= n && c < n {
                    true
                } else {
                    v == 0
                }
            })
        })
    }
}

/// A_{n,l} as 0/1 entries: A[i][j] = 1 iff j = i + l − 1.
pub fn shift_matrix(n: usize, l: u32) -> Vec<Vec<u8>> {
    (0..n).map(|i| (0..n).map(|j| u8::from(j + 1 == i + l as usize)).collect()).collect()
}

fn check_level(n: u32, g: &WildGenerator) -> Result<(), WildGroupError> {
    if g.l == 0 || g.l > n {
        return Err(WildGroupError::LevelOutOfRange { l: g.l, n });
    }
    Ok(())
}

/// [[I_n, 0], [u·A_{n,l}, I_n]].
pub fn generator_matrix(n: u32, g: &WildGenerator) -> Result<BlockUnipotentMatrix, WildGroupError> {
    check_level(n, g)?;
    let n = n as usize;
    let mut m = BlockUnipotentMatrix::identity(2 * n);
    for (i, row) in shift_matrix(n, g.l).iter().enumerate() {
        for (j, a) in row.iter().enumerate() {
            if *a == 1 {
                m.set(n + i, j, g.u);
            }
        }
    }
    Ok(m)
}

/// Position of ξ_i in the ordered basis.
pub fn basis_position(n: u32, i: i64) -> usize {
    let n = n as i64;
    assert!(i != 0 && i.abs() <= n, "index {i} outside ±1..±{n}");
    if i < 0 {
        (n + i) as usize
    } else {
        (2 * n - i) as usize
    }
}

/// Basis labels in matrix order.
pub fn basis_labels(n: u32) -> Vec<i64> {
    let n = n as i64;
    (1..=n).rev().map(|k| -k).chain((1..=n).rev()).collect()
}

/// Images of each basis vector, as (label, [(label, coefficient)]), in basis order.
pub fn act_on_basis(g: &WildGenerator, n: u32) -> Result<Vec<(i64, Vec<(i64, Elem)>)>, WildGroupError> {
    check_level(n, g)?;
    let l = g.l as i64;
    Ok(basis_labels(n)
        .into_iter()
        .map(|i| {
            let mut img = vec![(i, 1)];
            if i >= l && g.u != 0 {
                img.push((-(i - l + 1), g.u));
            }
            (i, img)
        })
        .collect())
}

/// Matrix of an action table in the ordered basis.
pub fn matrix_from_action(n: u32, action: &[(i64, Vec<(i64, Elem)>)], f: &FieldDescriptor) -> BlockUnipotentMatrix {
    let mut m = BlockUnipotentMatrix { size: 2 * n as usize, entries: vec![0; 4 * (n * n) as usize] };
    for (src, img) in action {
        let r = basis_position(n, *src);
        for (dst, c) in img {
            let col = basis_position(n, *dst);
            let v = f.add(m.get(r, col), *c);
            m.set(r, col, v);
        }
    }
    m
}

/// Number of generator levels: min(n, m) at infinity, n at a finite place.
pub fn group_levels(c: TowerCase, n: u32) -> Result<u32, WildGroupError> {
    match c {
        TowerCase::InfWild { m } => Ok(n.min(m)),
        TowerCase::FinWild => Ok(n),
        other => Err(WildGroupError::NotWildCase(other)),
    }
}

#[derive(Clone, Debug)]
pub struct WildGroup {
    pub levels: u32,
    pub generators: Vec<WildGenerator>,
    pub elements: Vec<BlockUnipotentMatrix>,
}

impl WildGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// Closure of all σ_{l,u} (1 ≤ l ≤ levels, u ≠ 0) under multiplication.
pub fn group_elements(c: TowerCase, f: &FieldDescriptor, n: u32) -> Result<WildGroup, WildGroupError> {
    group_elements_capped(c, f, n, DEFAULT_GROUP_CAP)
}

pub fn group_elements_capped(c: TowerCase, f: &FieldDescriptor, n: u32, cap: u64) -> Result<WildGroup, WildGroupError> {
    let levels = group_levels(c, n)?;
    let bound = (f.q() as u128).checked_pow(levels).unwrap_or(u128::MAX);
    if bound > cap as u128 {
        return Err(WildGroupError::CapExceeded { order: bound, cap });
    }
    let generators: Vec<WildGenerator> =
        (1..=levels).flat_map(|l| f.elements().filter(|&u| u != 0).map(move |u| WildGenerator { l, u })).collect();
    let mats: Vec<BlockUnipotentMatrix> =
        generators.iter().map(|g| generator_matrix(levels, g)).collect::<Result<_, _>>()?;
    let id = BlockUnipotentMatrix::identity(2 * levels as usize);
    let mut seen: HashSet<BlockUnipotentMatrix> = HashSet::from([id.clone()]);
    let mut elements = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &mats {
            let y = x.mul(g, f);
            if seen.insert(y.clone()) {
                if seen.len() as u64 > cap {
                    return Err(WildGroupError::CapExceeded { order: seen.len() as u128, cap });
                }
                elements.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(WildGroup { levels, generators, elements })
}

pub fn is_abelian(g: &WildGroup, f: &FieldDescriptor) -> bool {
    let mats: Vec<BlockUnipotentMatrix> =
        g.generators.iter().map(|x| generator_matrix(g.levels, x).unwrap()).collect();
    mats.iter().all(|a| mats.iter().all(|b| a.mul(b, f) == b.mul(a, f)))
}

/// Every element satisfies x^p = 1.
pub fn has_exponent_p(g: &WildGroup, f: &FieldDescriptor) -> bool {
    let id = BlockUnipotentMatrix::identity(2 * g.levels as usize);
    g.elements.iter().all(|x| x.pow(f.p() as u64, f) == id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;

    #[test]
    fn generator_examples() {
        let f = make_field(3, 1).unwrap();
        let m = generator_matrix(2, &WildGenerator { l: 1, u: 1 }).unwrap();
        assert_eq!(m.lower_block(), vec![vec![1, 0], vec![0, 1]]);
        let m2 = generator_matrix(2, &WildGenerator { l: 2, u: 1 }).unwrap();
        assert_eq!(m2.lower_block(), vec![vec![0, 1], vec![0, 0]]);
        let a = generator_matrix(2, &WildGenerator { l: 1, u: 2 }).unwrap();
        assert_eq!(m.mul(&a, &f), BlockUnipotentMatrix::identity(4));
        assert!(m2.is_block_unipotent());
        assert_eq!(
            generator_matrix(2, &WildGenerator { l: 3, u: 1 }),
            Err(WildGroupError::LevelOutOfRange { l: 3, n: 2 })
        );
    }

    #[test]
    fn action_examples() {
        let act = act_on_basis(&WildGenerator { l: 1, u: 2 }, 1).unwrap();
        assert_eq!(act, vec![(-1, vec![(-1, 1)]), (1, vec![(1, 1), (-1, 2)])]);
        let act = act_on_basis(&WildGenerator { l: 2, u: 1 }, 3).unwrap();
        let img = |i: i64| act.iter().find(|(s, _)| *s == i).unwrap().1.clone();
        assert_eq!(img(1), vec![(1, 1)]);
        assert_eq!(img(3), vec![(3, 1), (-2, 1)]);
        assert_eq!(img(-3), vec![(-3, 1)]);
        assert_eq!(basis_labels(2), vec![-2, -1, 2, 1]);
    }

    #[test]
    fn orders() {
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(group_elements(TowerCase::FinWild, &f3, 2).unwrap().order(), 9);
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(group_elements(TowerCase::FinWild, &f4, 1).unwrap().order(), 4);
        let f2 = make_field(2, 1).unwrap();
        for n in [3, 4] {
            assert_eq!(group_elements(TowerCase::InfWild { m: 3 }, &f2, n).unwrap().order(), 8);
        }
        assert!(matches!(group_elements(TowerCase::FinTame, &f2, 1), Err(WildGroupError::NotWildCase(_))));
        assert!(matches!(
            group_elements_capped(TowerCase::FinWild, &f3, 3, 10),
            Err(WildGroupError::CapExceeded { order: 27, cap: 10 })
        ));
    }
}
