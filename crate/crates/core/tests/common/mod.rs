#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use lambda_at::cli::{parse_simplicial, parse_voxel3d};
use lambda_at::{cubical_chain_complex, cubical_from_voxels, simplicial_chain_complex, simplicial_from_facets, ChainComplex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const POROUS_SEED: u64 = 0x00C0_FFEE;
pub const POROUS_DIMS: (usize, usize, usize) = (12, 12, 12);
pub const POROUS_DENSITY: f64 = 0.62;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn simplicial_fixture(name: &str) -> Arc<ChainComplex> {
    let sc = parse_simplicial(&fixture_path(name)).expect("fixture parses");
    Arc::new(simplicial_chain_complex(&sc))
}

pub fn voxel_fixture(name: &str) -> Arc<ChainComplex> {
    let cx = parse_voxel3d(&fixture_path(name)).expect("fixture parses");
    Arc::new(cubical_chain_complex(&cx))
}

/// Every bundled fixture as `(name, complex)`.
pub fn all_fixtures() -> Vec<(&'static str, Arc<ChainComplex>)> {
    vec![
        ("klein", simplicial_fixture("klein.txt")),
        ("torus", simplicial_fixture("torus.txt")),
        ("rp2", simplicial_fixture("rp2.txt")),
        ("strip", simplicial_fixture("strip.txt")),
        ("hollow", voxel_fixture("hollow3.txt")),
        ("porous", voxel_fixture("porous12.txt")),
    ]
}

/// The bundled porous image: each voxel of a 12^3 grid is black with a
/// fixed probability, drawn from a seeded ChaCha stream in x, y, z order.
pub fn porous_voxels() -> Vec<(i64, i64, i64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(POROUS_SEED);
    let (dx, dy, dz) = POROUS_DIMS;
    let mut out = Vec::new();
    for x in 0..dx as i64 {
        for y in 0..dy as i64 {
            for z in 0..dz as i64 {
                if rng.gen_bool(POROUS_DENSITY) {
                    out.push((x, y, z));
                }
            }
        }
    }
    out
}

pub fn voxel_file_text(dims: (usize, usize, usize), voxels: &[(i64, i64, i64)]) -> String {
    let mut s = format!("dims {} {} {}\n", dims.0, dims.1, dims.2);
    for (x, y, z) in voxels {
        s.push_str(&format!("{x} {y} {z}\n"));
    }
    s
}

const RP2_TRIANGLES: [[usize; 3]; 10] = [
    [0, 1, 2],
    [0, 2, 3],
    [0, 3, 4],
    [0, 4, 5],
    [0, 1, 5],
    [1, 2, 4],
    [2, 3, 5],
    [1, 3, 4],
    [2, 4, 5],
    [1, 3, 5],
];

fn random_subset(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut verts: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        verts.swap(i, j);
    }
    verts.truncate(k);
    verts
}

/// A random simplicial complex on at most `max_vertices` vertices (at least
/// 6 are allowed for the projective-plane mode). One of three shapes is drawn:
/// random facets of size 1..=4; a Linial-Meshulam 2-complex (full graph, each
/// triangle kept with a random probability); or a relabelled projective plane,
/// possibly punctured, with extra random facets.
pub fn random_simplicial(rng: &mut ChaCha8Rng, max_vertices: usize) -> Arc<ChainComplex> {
    let mut facets: Vec<Vec<usize>> = Vec::new();
    match rng.gen_range(0..3) {
        0 => {
            let n = rng.gen_range(1..=max_vertices);
            for _ in 0..rng.gen_range(1..=12) {
                let k = rng.gen_range(1..=4.min(n));
                facets.push(random_subset(rng, n, k));
            }
        }
        1 => {
            let n = rng.gen_range(4.min(max_vertices)..=max_vertices);
            let density: f64 = rng.gen_range(0.2..0.7);
            for a in 0..n {
                for b in a + 1..n {
                    facets.push(vec![a, b]);
                    for c in b + 1..n {
                        if rng.gen_bool(density) {
                            facets.push(vec![a, b, c]);
                        }
                    }
                }
            }
        }
        _ => {
            let n = rng.gen_range(6..=max_vertices.max(6));
            let labels = random_subset(rng, n, 6);
            let skip = rng.gen_bool(0.3).then(|| rng.gen_range(0..RP2_TRIANGLES.len()));
            for (i, t) in RP2_TRIANGLES.iter().enumerate() {
                if Some(i) != skip {
                    facets.push(t.iter().map(|&v| labels[v]).collect());
                }
            }
            for _ in 0..rng.gen_range(0..4) {
                let k = rng.gen_range(2..=4);
                facets.push(random_subset(rng, n, k));
            }
        }
    }
    let sc = simplicial_from_facets(&facets).expect("distinct vertices");
    Arc::new(simplicial_chain_complex(&sc))
}

/// A random binary image of at most `max_side`^3 voxels.
pub fn random_voxels(rng: &mut ChaCha8Rng, max_side: usize) -> Arc<ChainComplex> {
    let dims = (
        rng.gen_range(1..=max_side),
        rng.gen_range(1..=max_side),
        rng.gen_range(1..=max_side),
    );
    let density: f64 = rng.gen_range(0.2..0.8);
    let mut black = Vec::new();
    for x in 0..dims.0 as i64 {
        for y in 0..dims.1 as i64 {
            for z in 0..dims.2 as i64 {
                if rng.gen_bool(density) {
                    black.push((x, y, z));
                }
            }
        }
    }
    let cx = cubical_from_voxels(dims, &black).expect("in range");
    Arc::new(cubical_chain_complex(&cx))
}
