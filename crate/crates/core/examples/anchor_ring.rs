// The anchor ring (torus): the reduced operator, the printed component
// formulas with both sign conventions, and the a₃₃ profile that rules out
// a constant matrix.
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use tubular::frenet::CurveSpec;
use tubular::tubes::Tube;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let torus = Tube::new(CurveSpec::Circle { kappa: 1.0 }, 0.5)?;
    let eps = 0.15;

    let c = torus.laplacian_gauss_closed(0.0, FRAC_PI_3, eps)?;
    println!("Δᴵᴵ N at φ = π/3: t {:.6}, h {:.6}, b {:.6}", c.t, c.h, c.b);

    let general = torus.laplacian_coeffs(0.4, 1.0, eps)?;
    let reduced = torus.anchor_ring_operator(0.4, 1.0, eps)?;
    println!("general vs reduced operator: {:.2e}", general.max_abs_diff(&reduced));

    println!("\n{:>6} {:>12} {:>12} {:>12}", "phi", "printed", "flipped", "a33");
    for phi in [0.0, 0.5, 1.0, 2.0, 3.0, 4.0] {
        let cmp = torus.anchor_ring_comparison(1.0, phi, eps)?;
        println!(
            "{phi:>6.2} {:>12.2e} {:>12.2e} {:>12.6}",
            cmp.residual_printed_sign,
            cmp.residual_flipped_sign,
            torus.anchor_a33_profile(phi)?
        );
    }
    let spread = torus.anchor_a33_profile(FRAC_PI_2)? - torus.anchor_a33_profile(0.0)?;
    println!("a33 spread over [0, π/2]: {spread}");

    // away from unit curvature the printed bracket and the h-component differ
    let wide = Tube::new(CurveSpec::Circle { kappa: 0.6 }, 1.1)?;
    let gap = wide.anchor_ring_bracket(1.0)? - wide.laplacian_gauss_closed(0.0, 1.0, eps)?.h;
    println!("κ = 0.6: bracket - h-component at φ = 1: {gap:.6}");
    Ok(())
}
