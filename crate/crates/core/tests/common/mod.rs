#![allow(dead_code)]

use std::sync::Arc;

use qinv::exactnum::rat;
use qinv::refgroup::{GroupSpec, Multiplicity, ReflectionGroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CYCLIC: [&str; 3] = ["cyclic:2", "cyclic:3", "cyclic:4"];
pub const DIHEDRAL: [&str; 6] = ["dihedral:2:1", "dihedral:2:2", "dihedral:3:1", "dihedral:3:3", "dihedral:4:1", "dihedral:4:4"];

pub fn group(spec: &str) -> Arc<ReflectionGroup> {
    ReflectionGroup::cached(&GroupSpec::parse(spec).expect("group spec")).expect("group")
}

pub fn ints(rows: &[&[i64]]) -> Multiplicity {
    Multiplicity::from_ints(rows)
}

/// Every integral multiplicity with `k_{C,0} = 0` and entries in `0..=max`.
pub fn integral_ks(g: &ReflectionGroup, max: i64) -> Vec<Multiplicity> {
    let mut rows: Vec<Vec<Vec<i64>>> = vec![Vec::new()];
    for c in 0..g.orbits().len() {
        let n = g.orbit_n(c);
        let count = (max + 1).pow(n as u32 - 1);
        rows = rows
            .into_iter()
            .flat_map(|prefix| {
                (0..count).map(move |code| {
                    let digits = (1..n).scan(code, |rest, _| {
                        let d = *rest % (max + 1);
                        *rest /= max + 1;
                        Some(d)
                    });
                    let mut next = prefix.clone();
                    next.push(std::iter::once(0).chain(digits).collect());
                    next
                })
            })
            .collect();
    }
    rows.iter()
        .map(|r| Multiplicity::from_ints(&r.iter().map(Vec::as_slice).collect::<Vec<_>>()))
        .collect()
}

/// Seeded random rational multiplicities with `k_{C,0} = 0`.
pub fn random_rational_ks(g: &ReflectionGroup, count: usize, seed: u64) -> Vec<Multiplicity> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let values = (0..g.orbits().len())
                .map(|c| {
                    std::iter::once(rat(0, 1))
                        .chain((1..g.orbit_n(c)).map(|_| rat(rng.gen_range(-7..=7), rng.gen_range(2..=5))))
                        .collect()
                })
                .collect();
            Multiplicity::new(values, None)
        })
        .collect()
}
