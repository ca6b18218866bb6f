// Frenet frames of the three curve families, and the frame derivatives
// that feed the tube jets.
use tubular::frenet::{curve_jet, frenet_frame, Curve, CurveSpec, FourierCurve, FourierSeries};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let curves = [
        ("circle", CurveSpec::Circle { kappa: 1.0 }),
        ("helix", CurveSpec::Helix { a: 1.0, c: 1.0 }),
        (
            "fourier",
            CurveSpec::Fourier(FourierCurve {
                kappa: FourierSeries { c0: 0.8, cos: vec![0.2], sin: vec![0.0, 0.1] },
                tau: FourierSeries { c0: 0.3, cos: vec![], sin: vec![0.25] },
                domain: [0.0, std::f64::consts::TAU],
            }),
        ),
    ];
    for (name, spec) in curves {
        let curve = Curve::new(spec)?;
        println!("{name}");
        println!("{:>6} {:>10} {:>10} {:>28}", "u", "kappa", "tau", "t");
        for i in 0..5 {
            let u = 1.5 * i as f64;
            let f = frenet_frame(&curve, u)?;
            println!(
                "{u:>6.2} {:>10.6} {:>10.6} ({:>8.5}, {:>8.5}, {:>8.5})",
                f.kappa, f.tau, f.t.x, f.t.y, f.t.z
            );
        }
        // unit speed: |a'| = 1, and a'' = κ h
        let jet = curve_jet(&curve, 1.0, 2)?;
        let f = frenet_frame(&curve, 1.0)?;
        println!("  |a'(1)| = {:.15}", jet[1].norm());
        println!("  |a''(1) - κh| = {:.2e}", (jet[2] - f.h * f.kappa).norm());

        // h' = -κt + τb from the transported derivatives
        let d = curve.frame_derivatives(1.0)?;
        let resid = d.h[1] - (-d.t[0] * d.kappa[0] + d.b[0] * d.tau[0]);
        println!("  |h' + κt - τb| = {:.2e}\n", resid.norm());
    }

    let line = Curve::new(CurveSpec::Helix { a: 0.0, c: 1.0 })?;
    match frenet_frame(&line, 0.0) {
        Err(e) => println!("straight line: {e}"),
        Ok(_) => unreachable!("a line has no Frenet frame"),
    }
    Ok(())
}
