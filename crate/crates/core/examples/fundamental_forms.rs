// First, second and third fundamental forms, curvatures and the Gauss map
// on the built-in surfaces.
use tubular::frenet::CurveSpec;
use tubular::geom::{fundamental_forms, gauss_map, Surface, SurfaceSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let surfaces = [
        (SurfaceSpec::Sphere { radius: 1.0 }, (1.0, 0.5)),
        (SurfaceSpec::Ellipsoid { a: 1.0, b: 1.3, c: 0.7 }, (1.0, 0.5)),
        (SurfaceSpec::Cylinder { radius: 0.7 }, (0.3, 0.2)),
        (
            SurfaceSpec::Tube { curve: CurveSpec::Circle { kappa: 1.0 }, radius: 0.5 },
            (0.4, std::f64::consts::FRAC_PI_3),
        ),
        (
            SurfaceSpec::Tube { curve: CurveSpec::Helix { a: 1.0, c: 1.0 }, radius: 0.5 },
            (1.0, std::f64::consts::FRAC_PI_4),
        ),
    ];
    for (spec, (v1, v2)) in surfaces {
        let s = Surface::new(spec)?;
        let p = s.point(v1, v2)?;
        println!("{} at ({v1:.4}, {v2:.4})", s.name());
        for (name, f) in [("I", p.first), ("II", p.second), ("III", p.third)] {
            println!("  {name:<3} [{:>9.5} {:>9.5} {:>9.5}]", f.a11, f.a12, f.a22);
        }
        println!("  K = {:.6}, H = {:.6}", p.gauss_curvature, p.mean_curvature);

        // III = 2H II - K I
        let e = (0..2)
            .flat_map(|s| (0..2).map(move |t| (s, t)))
            .map(|(i, j)| {
                let want = 2.0 * p.mean_curvature * p.second.get(i, j) - p.gauss_curvature * p.first.get(i, j);
                (p.third.get(i, j) - want).abs()
            })
            .fold(0.0, f64::max);
        println!("  |III - (2H II - K I)| = {e:.2e}");

        let jet = s.jet(v1, v2)?;
        let gm = gauss_map(&jet)?;
        let (_, b, _) = fundamental_forms(&jet)?;
        // Weingarten: N_/1 · r_/1 = -b11
        println!("  N_1·r_1 + b11 = {:.2e}\n", gm.dn[0].dot(&jet.partial(1, 0)) + b.a11);
    }
    Ok(())
}
