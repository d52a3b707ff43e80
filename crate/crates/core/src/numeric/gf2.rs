//! Dense linear algebra over GF(2): kernels, solving, rank. Matrices are
//! row-lists of [`Bits`]. Everything is deterministic: pivots are chosen
//! lowest-index-first so computed bases are reproducible.

use super::bits::Bits;

/// Basis of the kernel {x : for all rows r, <r, x> = 0}, where rows have
/// `ncols` bits. Returned vectors are ordered by their leading free column.
pub fn kernel_basis(rows: &[Bits], ncols: usize) -> Vec<Bits> {
    let mut mat: Vec<Bits> = rows.to_vec();
    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if let Some(rr) = (r..mat.len()).find(|&i| mat[i].get(c)) {
            mat.swap(r, rr);
            let row = mat[r].clone();
            for (i, other) in mat.iter_mut().enumerate() {
                if i != r && other.get(c) {
                    other.xor_assign(&row);
                }
            }
            pivot_col_of_row.push(c);
            pivot_cols.push(c);
            r += 1;
        }
    }
    let is_pivot = {
        let mut v = vec![false; ncols];
        for &c in &pivot_cols {
            v[c] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..ncols {
        if is_pivot[free] {
            continue;
        }
        let mut vec = Bits::new(ncols);
        vec.set(free, true);
        for (row, &pc) in mat.iter().zip(&pivot_col_of_row) {
            if row.get(free) {
                vec.set(pc, true);
            }
        }
        basis.push(vec);
    }
    basis
}

pub fn rank(rows: &[Bits], ncols: usize) -> usize {
    let mut mat: Vec<Bits> = rows.to_vec();
    let mut r = 0;
    for c in 0..ncols {
        if let Some(rr) = (r..mat.len()).find(|&i| mat[i].get(c)) {
            mat.swap(r, rr);
            let row = mat[r].clone();
            for (i, other) in mat.iter_mut().enumerate() {
                if i != r && other.get(c) {
                    other.xor_assign(&row);
                }
            }
            r += 1;
        }
    }
    r
}

/// One solution x of the affine system `rows[i] . x = rhs[i]`, or None.
pub fn solve(rows: &[Bits], rhs: &[bool], ncols: usize) -> Option<Bits> {
    // augment with the rhs as an extra column
    let n = rows.len();
    let mut mat: Vec<Bits> = rows
        .iter()
        .zip(rhs)
        .map(|(r, &b)| {
            let mut row = Bits::new(ncols + 1);
            for i in r.iter_ones() {
                row.set(i, true);
            }
            row.set(ncols, b);
            row
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut r = 0;
    for c in 0..ncols {
        if r >= n {
            break;
        }
        if let Some(rr) = (r..n).find(|&i| mat[i].get(c)) {
            mat.swap(r, rr);
            let row = mat[r].clone();
            for (i, other) in mat.iter_mut().enumerate() {
                if i != r && other.get(c) {
                    other.xor_assign(&row);
                }
            }
            pivots.push((r, c));
            r += 1;
        }
    }
    // inconsistent row: 0 = 1
    for row in mat.iter().skip(r) {
        if row.get(ncols) {
            return None;
        }
    }
    let mut x = Bits::new(ncols);
    for &(row, col) in &pivots {
        if mat[row].get(ncols) {
            x.set(col, true);
        }
    }
    Some(x)
}

/// Invert a square GF(2) matrix given as rows; None if singular.
pub fn invert(rows: &[Bits], n: usize) -> Option<Vec<Bits>> {
    let mut mat: Vec<Bits> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = Bits::new(2 * n);
            for c in r.iter_ones() {
                row.set(c, true);
            }
            row.set(n + i, true);
            row
        })
        .collect();
    for c in 0..n {
        let rr = (c..n).find(|&i| mat[i].get(c))?;
        mat.swap(c, rr);
        let row = mat[c].clone();
        for (i, other) in mat.iter_mut().enumerate() {
            if i != c && other.get(c) {
                other.xor_assign(&row);
            }
        }
    }
    Some(
        mat.iter()
            .map(|r| {
                let mut out = Bits::new(n);
                for c in 0..n {
                    if r.get(n + c) {
                        out.set(c, true);
                    }
                }
                out
            })
            .collect(),
    )
}

/// Iterate every vector of span(basis) exactly once in Gray-code order,
/// calling `f(current, flipped_basis_index)`; the first call is the zero
/// vector with `None`. Returns early with an error code bubbled by `f`.
pub fn for_each_in_span<F>(basis: &[Bits], ncols: usize, mut f: F)
where
    F: FnMut(&Bits, Option<usize>),
{
    let mut cur = Bits::new(ncols);
    f(&cur, None);
    let m = basis.len();
    assert!(m < 63, "span too large to enumerate");
    for g in 1u64..1 << m {
        let flip = g.trailing_zeros() as usize;
        cur.xor_assign(&basis[flip]);
        f(&cur, Some(flip));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: usize, idx: &[usize]) -> Bits {
        Bits::from_indices(n, idx)
    }

    #[test]
    fn kernel_of_cycle_constraints() {
        // triangle incidence matrix: rows = vertices, cols = edges 01,12,20
        let rows = vec![b(3, &[0, 2]), b(3, &[0, 1]), b(3, &[1, 2])];
        let k = kernel_basis(&rows, 3);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].indices(), vec![0, 1, 2]);
    }

    #[test]
    fn solve_and_invert() {
        let rows = vec![b(2, &[0, 1]), b(2, &[1])];
        let x = solve(&rows, &[true, false], 2).unwrap();
        assert!(x.get(0) && !x.get(1));
        let inv = invert(&rows, 2).unwrap();
        assert_eq!(inv[0].indices(), vec![0, 1]);
        assert_eq!(inv[1].indices(), vec![1]);
        let singular = vec![b(2, &[0, 1]), b(2, &[0, 1])];
        assert!(invert(&singular, 2).is_none());
    }

    #[test]
    fn span_enumeration_covers_everything() {
        let basis = vec![b(3, &[0]), b(3, &[1, 2])];
        let mut seen = std::collections::BTreeSet::new();
        for_each_in_span(&basis, 3, |v, _| {
            seen.insert(v.clone());
        });
        assert_eq!(seen.len(), 4);
    }
}
