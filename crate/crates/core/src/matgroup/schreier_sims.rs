//! Deterministic Schreier-Sims on permutation groups of small degree.

use num_bigint::BigUint;
use num_traits::One;

/// A permutation stored as its image list: `p[x]` is the image of `x`.
pub type Perm = Vec<u32>;

fn identity(n: usize) -> Perm {
    (0..n as u32).collect()
}

fn is_identity(p: &Perm) -> bool {
    p.iter().enumerate().all(|(i, &x)| i as u32 == x)
}

/// `(a * b)(x) = a(b(x))`.
fn compose(a: &Perm, b: &Perm) -> Perm {
    b.iter().map(|&x| a[x as usize]).collect()
}

fn invert(p: &Perm) -> Perm {
    let mut inv = vec![0u32; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

struct Level {
    base: u32,
    /// `transversal[p] = u` with `u(base) = p`, for `p` in the basic orbit.
    transversal: Vec<Option<Perm>>,
    orbit: Vec<u32>,
    /// Schreier generator (orbit point, strong generator id) pairs already sifted.
    checked: std::collections::HashSet<(u32, usize)>,
}

impl Level {
    fn new(base: u32, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base as usize] = Some(identity(degree));
        Level { base, transversal, orbit: vec![base], checked: Default::default() }
    }

    /// Extends the orbit under `gens`, keeping existing transversal entries.
    fn extend_orbit(&mut self, gens: &[&Perm]) {
        let mut i = 0;
        while i < self.orbit.len() {
            let p = self.orbit[i];
            for g in gens {
                let q = g[p as usize];
                if self.transversal[q as usize].is_none() {
                    let u = compose(g, self.transversal[p as usize].as_ref().expect("orbit point has transversal"));
                    self.transversal[q as usize] = Some(u);
                    self.orbit.push(q);
                }
            }
            i += 1;
        }
    }
}

/// A base and strong generating set with its stabilizer chain.
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
    strong: Vec<Perm>,
}

impl StabilizerChain {
    /// Runs Schreier-Sims on the group generated by `gens` (permutations of
    /// `0..degree`).
    pub fn new(degree: usize, gens: &[Perm]) -> Self {
        let mut chain = StabilizerChain { degree, levels: Vec::new(), strong: Vec::new() };
        for g in gens {
            assert_eq!(g.len(), degree, "permutation degree mismatch");
            if !is_identity(g) && !chain.strong.contains(g) {
                chain.strong.push(g.clone());
            }
        }
        for g in chain.strong.clone() {
            if chain.levels.iter().all(|l| g[l.base as usize] == l.base) {
                let moved = first_moved_point(&g);
                chain.levels.push(Level::new(moved, degree));
            }
        }
        for i in 0..chain.levels.len() {
            chain.refresh_orbit(i);
        }
        chain.complete();
        chain
    }

    fn gens_at(&self, level: usize) -> Vec<usize> {
        (0..self.strong.len())
            .filter(|&s| self.levels[..level].iter().all(|l| self.strong[s][l.base as usize] == l.base))
            .collect()
    }

    fn refresh_orbit(&mut self, level: usize) {
        let ids = self.gens_at(level);
        let gens: Vec<Perm> = ids.iter().map(|&s| self.strong[s].clone()).collect();
        let refs: Vec<&Perm> = gens.iter().collect();
        self.levels[level].extend_orbit(&refs);
    }

    /// Sifts `g` through levels `from..`; returns the residue and the level
    /// where sifting stopped (`levels.len()` if it went all the way).
    fn strip(&self, mut g: Perm, from: usize) -> (Perm, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let p = g[level.base as usize];
            match &level.transversal[p as usize] {
                None => return (g, l),
                Some(u) => g = compose(&invert(u), &g),
            }
        }
        (g, self.levels.len())
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let lvl = i as usize;
            let mut restart = None;
            let ids = self.gens_at(lvl);
            let orbit = self.levels[lvl].orbit.clone();
            'scan: for &p in &orbit {
                for &s in &ids {
                    if !self.levels[lvl].checked.insert((p, s)) {
                        continue;
                    }
                    let level = &self.levels[lvl];
                    let sp = self.strong[s][p as usize];
                    let u_p = level.transversal[p as usize].as_ref().unwrap();
                    let u_sp = level.transversal[sp as usize].as_ref().unwrap();
                    let h = compose(&invert(u_sp), &compose(&self.strong[s], u_p));
                    let (residue, j) = self.strip(h, lvl + 1);
                    if j < self.levels.len() || !is_identity(&residue) {
                        if j == self.levels.len() {
                            let moved = first_moved_point(&residue);
                            self.levels.push(Level::new(moved, self.degree));
                        }
                        self.strong.push(residue);
                        for l in lvl + 1..=j {
                            self.refresh_orbit(l);
                        }
                        restart = Some(j);
                        break 'scan;
                    }
                }
            }
            match restart {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> &[Perm] {
        &self.strong
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn contains(&self, g: &Perm) -> bool {
        let (residue, j) = self.strip(g.clone(), 0);
        j == self.levels.len() && is_identity(&residue)
    }
}

fn first_moved_point(g: &Perm) -> u32 {
    g.iter().enumerate().find(|(i, &x)| *i as u32 != x).map(|(i, _)| i as u32).expect("non-identity permutation")
}
