use std::ops::ControlFlow;

use super::cayley::CayleyTable;

/// Extends `gens[k] -> images[k]` to a homomorphism on `<gens>`, returning the
/// map on element indices (`usize::MAX` outside `<gens>`), or `None` if the
/// assignment is inconsistent.
fn extend(t1: &CayleyTable, gens: &[usize], t2: &CayleyTable, images: &[usize]) -> Option<Vec<usize>> {
    let mut phi = vec![usize::MAX; t1.len()];
    phi[t1.identity()] = t2.identity();
    let mut queue = vec![t1.identity()];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        for (&g, &h) in gens.iter().zip(images) {
            let y = t1.mul(x, g);
            let fy = t2.mul(phi[x], h);
            if phi[y] == usize::MAX {
                phi[y] = fy;
                queue.push(y);
            } else if phi[y] != fy {
                return None;
            }
        }
        i += 1;
    }
    Some(phi)
}

/// Enumerates isomorphisms `G1 -> G2` by backtracking over generator images.
///
/// `compatible(g, h)` prunes candidate images (element orders are always
/// matched). Each isomorphism is passed to `visit` as the image index of every
/// element of `G1`; returning `ControlFlow::Break` stops the search.
pub fn for_each_isomorphism<B>(
    t1: &CayleyTable,
    gens: &[usize],
    t2: &CayleyTable,
    compatible: &dyn Fn(usize, usize) -> bool,
    visit: &mut dyn FnMut(&[usize]) -> ControlFlow<B>,
) -> Option<B> {
    if t1.len() != t2.len() {
        return None;
    }
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| (0..t2.len()).filter(|&h| t2.order_of(h) == t1.order_of(g) && compatible(g, h)).collect())
        .collect();
    let mut images = Vec::with_capacity(gens.len());
    match search(t1, gens, t2, &candidates, &mut images, visit) {
        ControlFlow::Break(b) => Some(b),
        ControlFlow::Continue(()) => None,
    }
}

fn search<B>(
    t1: &CayleyTable,
    gens: &[usize],
    t2: &CayleyTable,
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let k = images.len();
    if k == gens.len() {
        let Some(phi) = extend(t1, gens, t2, images) else {
            return ControlFlow::Continue(());
        };
        if t1.closure(gens).len() != t1.len() {
            return ControlFlow::Continue(());
        }
        // injective iff the images generate all of G2, as orders agree
        if t2.closure(images).len() != t2.len() {
            return ControlFlow::Continue(());
        }
        return visit(&phi);
    }
    for &h in &candidates[k] {
        images.push(h);
        if extend(t1, &gens[..=k], t2, images).is_some() {
            search(t1, gens, t2, candidates, images, visit)?;
        }
        images.pop();
    }
    ControlFlow::Continue(())
}

/// All isomorphisms `G1 -> G2` as element index maps.
pub fn isomorphisms(
    t1: &CayleyTable,
    gens: &[usize],
    t2: &CayleyTable,
    compatible: &dyn Fn(usize, usize) -> bool,
) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_isomorphism::<()>(t1, gens, t2, compatible, &mut |phi| {
        out.push(phi.to_vec());
        ControlFlow::Continue(())
    });
    out
}
