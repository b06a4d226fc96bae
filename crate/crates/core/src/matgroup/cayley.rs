use std::collections::HashMap;

use super::element::GroupMatrix;

/// Multiplication table of a finite group over its element list.
#[derive(Clone, Debug)]
pub struct CayleyTable {
    n: usize,
    identity: usize,
    mul: Vec<u32>,
    inverse: Vec<u32>,
    orders: Vec<u32>,
}

impl CayleyTable {
    pub fn new<M: GroupMatrix>(elements: &[M], index: &HashMap<M, usize>) -> Self {
        let n = elements.len();
        let mut mul = vec![0u32; n * n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                mul[i * n + j] = index[&a.product(b)] as u32;
            }
        }
        let identity = elements.iter().position(|g| g.is_identity_matrix()).expect("group has an identity");
        Self::from_parts(n, identity, mul)
    }

    fn from_parts(n: usize, identity: usize, mul: Vec<u32>) -> Self {
        let mut inverse = vec![0u32; n];
        for i in 0..n {
            inverse[i] = (0..n).find(|&j| mul[i * n + j] as usize == identity).expect("inverse exists") as u32;
        }
        let mut orders = vec![0u32; n];
        for i in 0..n {
            let mut x = i;
            let mut k = 1;
            while x != identity {
                x = mul[x * n + i] as usize;
                k += 1;
            }
            orders[i] = k;
        }
        CayleyTable { n, identity, mul, inverse, orders }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn order_of(&self, a: usize) -> u32 {
        self.orders[a]
    }

    /// Subgroup generated by `gens`, as a sorted index list.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[self.identity] = true;
        let mut out = vec![self.identity];
        let mut i = 0;
        while i < out.len() {
            for &g in gens {
                let y = self.mul(out[i], g);
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
}
