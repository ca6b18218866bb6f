// Positive controls for the fit: the sphere and the cylinder satisfy
// Δᴵ N = A N exactly; synthetic data recovers a known matrix.
use nalgebra::{Matrix3, Vector3};
use tubular::beltrami::Form;
use tubular::finitetype::{collect_samples, default_grid, fit_coordinate_matrix, fit_matrix};
use tubular::geom::{Surface, SurfaceSpec};

fn show(name: &str, a: &Matrix3<f64>) {
    println!("{name}");
    for i in 0..3 {
        println!("  [{:>9.5} {:>9.5} {:>9.5}]", a[(i, 0)], a[(i, 1)], a[(i, 2)]);
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for spec in [SurfaceSpec::Sphere { radius: 1.0 }, SurfaceSpec::Cylinder { radius: 0.7 }] {
        let s = Surface::new(spec)?;
        let samples = collect_samples(&s, Form::First, &default_grid(&s, 16, 16))?;
        let r = fit_coordinate_matrix(&samples)?;
        show(s.name(), &r.matrix());
        println!(
            "  residual {:.2e}, singular values {:.3?}, {:?}",
            r.normalized_residual, r.singular_values, r.verdict
        );
    }

    // normals on a spiral over the sphere, images from a fixed matrix
    let normals: Vec<Vector3<f64>> = (0..50)
        .map(|k| {
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / 50.0;
            let phi = 2.399963 * k as f64;
            let rho = (1.0 - z * z).sqrt();
            Vector3::new(rho * phi.cos(), rho * phi.sin(), z)
        })
        .collect();
    let a0 = Matrix3::new(1.0, -2.0, 0.5, 0.0, 3.0, 1.0, -1.5, 0.25, 2.0);
    let images: Vec<_> = normals.iter().map(|n| a0 * n).collect();
    let r = fit_matrix(&normals, &images)?;
    show("synthetic", &r.matrix());
    println!("  max |A - A0| = {:.2e}, {:?}", (r.matrix() - a0).amax(), r.verdict);
    Ok(())
}
