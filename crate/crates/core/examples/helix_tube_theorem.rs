// Case split and finite-type fit for tubes: the torus (β ≡ 0) and a tube
// around a helix (β ≠ 0). Both come out of infinite type for the second form.
use tubular::finitetype::{default_grid, theorem_check_tube};
use tubular::frenet::CurveSpec;
use tubular::tubes::{tube_surface, TubeSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let specs = [
        ("torus", TubeSpec { curve: CurveSpec::Circle { kappa: 1.0 }, radius: 0.5 }),
        ("helix tube", TubeSpec { curve: CurveSpec::Helix { a: 1.0, c: 1.0 }, radius: 0.5 }),
    ];
    for (name, spec) in specs {
        let surface = tube_surface(&spec)?;
        let tube = surface.as_tube().expect("tube");
        println!("{name}: β(0, π/4) = {:.12}", tube.point(0.0, std::f64::consts::FRAC_PI_4)?.beta);
        for n in [16, 32, 64] {
            let r = theorem_check_tube(&spec, &default_grid(&surface, n, n))?;
            println!(
                "  {n:>2}x{n:<2} case {:?}, max|β| {:.5}, residual {:.6}, σ_min {:.4}, {:?}",
                r.case, r.max_abs_beta, r.fit.normalized_residual, r.fit.min_singular_value, r.verdict
            );
            if let Some(a) = r.a33 {
                println!("         a33 needs {:.3}..{:.3} (spread {:.3})", a.min, a.max, a.spread);
            }
        }
        let r = theorem_check_tube(&spec, &default_grid(&surface, 32, 32))?;
        let a = r.fit.matrix();
        println!("  best A:");
        for i in 0..3 {
            println!("    [{:>9.5} {:>9.5} {:>9.5}]", a[(i, 0)], a[(i, 1)], a[(i, 2)]);
        }
    }
    Ok(())
}
