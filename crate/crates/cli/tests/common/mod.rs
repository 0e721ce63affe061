//! Independent oracles for the acceptance suite. These deliberately avoid
//! the library's categorical exactness machinery: exactness is decided by
//! chasing elements, and unimodularity by cofactor determinants.

use exacta_core::fgab::{AbCat, AbMorphism};
use exacta_core::fingrp::GroupHom;
use exacta_core::matrix::{Int, Mat};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

/// Element-chase exactness for finite groups: image of f equals the fiber
/// of the unit under g.
pub fn grp_exact_at_oracle(f: &GroupHom, g: &GroupHom) -> bool {
    assert_eq!(f.cod, g.dom);
    let image: BTreeSet<usize> = f.table.iter().copied().collect();
    let kernel: BTreeSet<usize> =
        (0..g.dom.size).filter(|&b| g.table[b] == 0).collect();
    image == kernel
}

/// Element sets of a finite presented abelian group, as reduced canonical
/// coordinate tuples.
fn ab_elements(cat: &AbCat, x: &exacta_core::fgab::AbObject) -> Vec<Vec<Int>> {
    let (canon, _to, from) = cat.canonical_iso(x);
    cat.elements_canonical(&canon, 1 << 16)
        .expect("oracle needs finite objects")
        .into_iter()
        .map(|row| {
            // presentation coordinates of the element
            Mat::row_vec(row).mul(&from.mat).row(0).to_vec()
        })
        .collect()
}

fn ab_normalize(cat: &AbCat, x: &exacta_core::fgab::AbObject, row: &[Int]) -> Vec<Int> {
    let (canon, to, _from) = cat.canonical_iso(x);
    let v = Mat::row_vec(row.to_vec()).mul(&to.mat);
    let c = canon.canon();
    v.row(0)
        .iter()
        .zip(&c.moduli)
        .map(|(a, m)| {
            if m.is_zero() {
                a.clone()
            } else {
                num_integer::Integer::mod_floor(a, m)
            }
        })
        .collect()
}

/// Element-chase exactness for finite abelian groups.
pub fn ab_exact_at_oracle(cat: &AbCat, f: &AbMorphism, g: &AbMorphism) -> bool {
    assert_eq!(f.cod, g.dom);
    let mid = &f.cod;
    let image: BTreeSet<Vec<Int>> = ab_elements(cat, &f.dom)
        .into_iter()
        .map(|x| ab_normalize(cat, mid, Mat::row_vec(x).mul(&f.mat).row(0)))
        .collect();
    let kernel: BTreeSet<Vec<Int>> = ab_elements(cat, mid)
        .into_iter()
        .filter(|x| {
            let img = ab_normalize(cat, &g.cod, Mat::row_vec(x.clone()).mul(&g.mat).row(0));
            img.iter().all(|v| v.is_zero())
        })
        .map(|x| ab_normalize(cat, mid, &x))
        .collect();
    image == kernel
}

/// Cofactor-expansion determinant, independent of the SNF machinery.
pub fn det_oracle(m: &Mat) -> Int {
    assert_eq!(m.rows, m.cols);
    fn go(m: &Mat, cols: &mut Vec<usize>, row: usize) -> Int {
        if cols.is_empty() {
            return Int::one();
        }
        let mut acc = Int::zero();
        for i in 0..cols.len() {
            let c = cols.remove(i);
            let term = &m[(row, c)] * go(m, cols, row + 1);
            if i % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
            cols.insert(i, c);
        }
        acc
    }
    let mut cols: Vec<usize> = (0..m.cols).collect();
    go(m, &mut cols, 0)
}

pub fn is_unimodular_oracle(m: &Mat) -> bool {
    m.rows == m.cols && det_oracle(m).abs().is_one()
}
