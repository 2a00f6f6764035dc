//! Exhaustive zero set over GF(2^m)^k with pruning.
//!
//! Variables are assigned in index order; a polynomial is checked as soon
//! as its highest variable is assigned.

use crate::attack::MultiPoly;
use crate::field::{Field, Gf};

/// All common zeros in GF(2^m)^k, sorted lexicographically.
pub fn zero_set(field: &Field, k: usize, polys: &[MultiPoly]) -> Vec<Vec<Gf>> {
    let mut by_last: Vec<Vec<&MultiPoly>> = vec![Vec::new(); k + 1];
    for p in polys.iter().filter(|p| !p.is_zero()) {
        // constants land in slot 0 and are checked before any assignment
        let slot = p.variables().last().map_or(0, |&v| v + 1);
        by_last[slot].push(p);
    }
    if by_last[0].iter().any(|p| !p.is_zero()) {
        return Vec::new();
    }
    let mut point = vec![Gf::ZERO; k];
    let mut out = Vec::new();
    descend(field, &by_last, &mut point, 0, &mut out);
    out
}

fn descend(field: &Field, by_last: &[Vec<&MultiPoly>], point: &mut Vec<Gf>, depth: usize, out: &mut Vec<Vec<Gf>>) {
    if depth == point.len() {
        out.push(point.clone());
        return;
    }
    for a in field.elements() {
        point[depth] = a;
        if by_last[depth + 1].iter().all(|p| p.eval(field, point).is_zero()) {
            descend(field, by_last, point, depth + 1, out);
        }
    }
}
