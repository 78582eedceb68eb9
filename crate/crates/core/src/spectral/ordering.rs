//! Geometric nested dissection for five-point lattice graphs.

const LEAF: usize = 64;

/// Fill-reducing elimination order (new index → old index) for nodes at
/// integer lattice coordinates whose couplings join nearest neighbours only.
/// A full lattice line splits each block; the line is numbered after both halves.
pub fn nested_dissection(coords: &[(i64, i64)]) -> Vec<usize> {
    let mut out = Vec::with_capacity(coords.len());
    dissect((0..coords.len()).collect(), coords, &mut out);
    out
}

fn dissect(idx: Vec<usize>, coords: &[(i64, i64)], out: &mut Vec<usize>) {
    if idx.len() <= LEAF {
        out.extend(idx);
        return;
    }
    let (mut lo, mut hi) = ((i64::MAX, i64::MAX), (i64::MIN, i64::MIN));
    for &k in &idx {
        let (i, j) = coords[k];
        lo = (lo.0.min(i), lo.1.min(j));
        hi = (hi.0.max(i), hi.1.max(j));
    }
    let along_x = hi.0 - lo.0 >= hi.1 - lo.1;
    if (along_x && hi.0 == lo.0) || (!along_x && hi.1 == lo.1) {
        out.extend(idx);
        return;
    }
    let key = |k: usize| if along_x { coords[k].0 } else { coords[k].1 };
    let mut keys: Vec<i64> = idx.iter().map(|&k| key(k)).collect();
    let mid = keys.len() / 2;
    let (_, &mut c, _) = keys.select_nth_unstable(mid);
    let (mut left, mut right, mut sep) = (Vec::new(), Vec::new(), Vec::new());
    for k in idx {
        match key(k).cmp(&c) {
            std::cmp::Ordering::Less => left.push(k),
            std::cmp::Ordering::Greater => right.push(k),
            std::cmp::Ordering::Equal => sep.push(k),
        }
    }
    dissect(left, coords, out);
    dissect(right, coords, out);
    out.extend(sep);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn is_a_permutation() {
        let coords: Vec<(i64, i64)> = (0..40).flat_map(|j| (0..30).map(move |i| (i, j))).collect();
        let mut p = nested_dissection(&coords);
        assert_eq!(p.len(), 1200);
        p.sort_unstable();
        assert!(p.iter().enumerate().all(|(i, &v)| i == v));
    }
}
