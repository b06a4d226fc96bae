use std::collections::HashSet;

use super::cayley::CayleyTable;

/// Fixed-size bitset over element indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Bits(Vec<u64>);

impl Bits {
    fn from_indices(n: usize, idx: &[usize]) -> Self {
        let mut words = vec![0u64; n.div_ceil(64)];
        for &i in idx {
            words[i / 64] |= 1 << (i % 64);
        }
        Bits(words)
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn indices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in self.0.iter().enumerate() {
            let mut x = word;
            while x != 0 {
                let b = x.trailing_zeros() as usize;
                out.push(w * 64 + b);
                x &= x - 1;
            }
        }
        out
    }
}

/// `<H, g>` as a sorted index list: the closure of `H ∪ {g}` under right
/// multiplication by those same elements.
fn join(table: &CayleyTable, h: &[usize], g: usize) -> Vec<usize> {
    let mut seen = vec![false; table.len()];
    let mut out = Vec::with_capacity(2 * h.len());
    for &x in h.iter().chain([g].iter()) {
        if !seen[x] {
            seen[x] = true;
            out.push(x);
        }
    }
    let mut i = 0;
    while i < out.len() {
        for &s in h.iter().chain([g].iter()) {
            let y = table.mul(out[i], s);
            if !seen[y] {
                seen[y] = true;
                out.push(y);
            }
        }
        i += 1;
    }
    out.sort_unstable();
    out
}

/// Element index sets of all subgroups, each listed once, sorted by
/// (size, indices).
///
/// Every subgroup is reached by adjoining one cyclic generator at a time to a
/// smaller subgroup, starting from the trivial group.
pub fn subgroup_index_sets(table: &CayleyTable) -> Vec<Vec<usize>> {
    let n = table.len();
    let trivial = vec![table.identity()];
    let mut found: HashSet<Bits> = HashSet::new();
    found.insert(Bits::from_indices(n, &trivial));
    let mut frontier = vec![trivial];
    while let Some(h) = frontier.pop() {
        let bits = Bits::from_indices(n, &h);
        for g in 0..n {
            if bits.contains(g) {
                continue;
            }
            let k = join(table, &h, g);
            let kb = Bits::from_indices(n, &k);
            if found.insert(kb) {
                frontier.push(k);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = found.into_iter().map(|b| b.indices()).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}
