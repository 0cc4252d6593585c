//! Shared fixture systems for the criterion benchmarks.
//!
//! The three systems cover the pipeline's distinct workloads: a two-map
//! pair with a swap-squash block (classification + closed-form solve), a
//! boundary-balance pair (connectivity rasters), and a certified planar
//! pair (separating-rectangle construction).

use ifslab::{AffineMap, IfsSystem};

fn map2(matrix: [f64; 4], translation: [f64; 2]) -> AffineMap {
    AffineMap::from_parts(&matrix, &translation).expect("valid fixture map")
}

/// Swap-squash block plus axis-flipped half-scale similarity; its
/// dimension has the golden-ratio closed form.
pub fn golden_swap() -> IfsSystem {
    IfsSystem::new(vec![
        map2([0.0, 0.5, 1.0, 0.0], [1.0, 0.0]),
        map2([-0.5, 0.0, 0.0, 0.5], [0.0, 1.0]),
    ])
    .expect("contractive fixture")
    .with_name("golden_swap")
}

/// Boundary-balance pair (ratio sum exactly one): the connectivity
/// raster's worst case, since every pixel belongs to one component.
pub fn bottleneck_red() -> IfsSystem {
    IfsSystem::new(vec![
        map2([0.0, 0.5, 1.0, 0.0], [0.0, 0.0]),
        map2([0.5, 0.0, 0.0, 0.5], [0.0, 0.5]),
    ])
    .expect("contractive fixture")
    .with_name("bottleneck_red")
}

/// Planar pair whose separating rectangle is the exact square with
/// corners (0,0) and (1.75,1.75).
pub fn cert_square_quarters() -> IfsSystem {
    IfsSystem::new(vec![
        map2([0.0, 1.0, 0.25, 0.0], [0.0, 0.0]),
        map2([-0.75, 0.0, 0.0, -0.75], [1.75, 1.75]),
    ])
    .expect("contractive fixture")
    .with_name("cert_square_quarters")
}
