use std::sync::Arc;

use blowuplab_core::grid::{Grading, RadialField, RadialGrid};

#[test]
fn geometric_grading_compresses_spacing_toward_origin() {
    let grid = RadialGrid::build(3, 2.0, 128, Grading::Geometric { ratio: 16.0 }).unwrap();
    let nodes = grid.nodes();
    assert_eq!(nodes.len(), 129);
    assert_eq!(nodes[0], 0.0);
    assert!((nodes[128] - 2.0).abs() < 1e-14);
    assert!(nodes.windows(2).all(|w| w[1] > w[0]));
    let measured = grid.boundary_spacing() / grid.origin_spacing();
    assert!(
        (measured - 16.0).abs() / 16.0 < 0.01,
        "boundary/origin spacing ratio {measured} should track the grading ratio"
    );
}

#[test]
fn rebuilding_a_grid_is_bit_identical() {
    let a = RadialGrid::build(3, 1.5, 200, Grading::Geometric { ratio: 10.0 }).unwrap();
    let b = RadialGrid::build(3, 1.5, 200, Grading::Geometric { ratio: 10.0 }).unwrap();
    assert_eq!(a.nodes(), b.nodes());
}

#[test]
fn build_rejects_degenerate_parameters() {
    assert!(RadialGrid::build(0, 1.0, 64, Grading::Uniform).is_err());
    assert!(RadialGrid::build(3, -1.0, 64, Grading::Uniform).is_err());
    assert!(RadialGrid::build(3, 1.0, 8, Grading::Uniform).is_err());
    assert!(RadialGrid::build(3, 1.0, 64, Grading::Geometric { ratio: 0.5 }).is_err());
}

#[test]
fn laplacian_is_exact_on_quadratics() {
    // Δ(r²) = 2N for the radial Laplacian; the three-point stencil and the
    // origin row both reproduce it exactly, so only roundoff remains.
    for dimension in [1u32, 2, 3, 5] {
        for grading in [Grading::Uniform, Grading::Geometric { ratio: 8.0 }] {
            let grid = Arc::new(RadialGrid::build(dimension, 1.0, 100, grading).unwrap());
            let field = RadialField::from_fn(&grid, |r| r * r).unwrap();
            let lap = field.laplacian();
            let expect = 2.0 * dimension as f64;
            for (i, &v) in lap.values().iter().enumerate() {
                if i + 1 == grid.nodes().len() {
                    assert_eq!(v, 0.0, "boundary row must stay zero");
                } else {
                    assert!(
                        (v - expect).abs() < 1e-8,
                        "N={dimension} {grading:?} node {i}: {v} vs {expect}"
                    );
                }
            }
        }
    }
}

#[test]
fn laplacian_converges_at_second_order_on_smooth_data() {
    // u = 1/(1+r²): Δu = (6r² - 2)/(1+r²)³ + (N-1)/r · (-2r/(1+r²)²), N = 3.
    let exact = |r: f64| {
        (6.0 * r * r - 2.0) / (1.0 + r * r).powi(3) - 4.0 / (1.0 + r * r).powi(2)
    };
    for grading in [Grading::Uniform, Grading::Geometric { ratio: 4.0 }] {
        let mut errs = Vec::new();
        for intervals in [64usize, 128, 256, 512] {
            let grid = Arc::new(RadialGrid::build(3, 1.0, intervals, grading).unwrap());
            let field = RadialField::from_fn(&grid, |r| 1.0 / (1.0 + r * r)).unwrap();
            let lap = field.laplacian();
            let worst = grid
                .nodes()
                .iter()
                .zip(lap.values())
                .take(grid.nodes().len() - 1)
                .map(|(&r, &v)| (v - exact(r)).abs())
                .fold(0.0f64, f64::max);
            errs.push(worst);
        }
        for pair in errs.windows(2) {
            let rate = (pair[0] / pair[1]).log2();
            assert!(
                (1.8..=2.2).contains(&rate),
                "{grading:?}: rate {rate} outside [1.8, 2.2] (errors {errs:?})"
            );
        }
    }
}

#[test]
fn field_construction_checks_lengths_and_finiteness() {
    let grid = Arc::new(RadialGrid::build(3, 1.0, 32, Grading::Uniform).unwrap());
    assert!(RadialField::new(Arc::clone(&grid), vec![0.0; 5]).is_err());
    assert!(RadialField::new(Arc::clone(&grid), vec![f64::NAN; 33]).is_err());
    let field = RadialField::constant(&grid, 2.5).unwrap();
    assert_eq!(field.max_value(), 2.5);
    assert_eq!(field.min_value(), 2.5);
}
