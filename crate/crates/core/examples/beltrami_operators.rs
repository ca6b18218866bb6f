// Beltrami operators with respect to each fundamental form, and the
// Gauss map identity relating the second-form Laplacian to K and H.
use tubular::beltrami::{
    beltrami_first, christoffel, grad_i, laplacian_scalar, laplacian_vector, verify_gauss_identity, Form,
    ScalarField, VectorField,
};
use tubular::geom::{Surface, SurfaceSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sphere = Surface::new(SurfaceSpec::Sphere { radius: 1.0 })?;
    let geo = sphere.local(0.9, 0.4)?;
    let g = christoffel(&geo, Form::First)?;
    println!("unit sphere at θ = 0.9");
    println!("  Γ¹₂₂ = {:.12} (-sinθ cosθ = {:.12})", g.get(0, 1, 1), -(0.9f64.sin() * 0.9f64.cos()));
    println!("  Γ²₁₂ = {:.12} (cotθ = {:.12})", g.get(1, 0, 1), 1.0 / 0.9f64.tan());
    let z = ScalarField::coordinate(2);
    println!("  Δᴵz = {:.12}, 2z = {:.12}", laplacian_scalar(&geo, &z, Form::First)?, 2.0 * geo.position.value().z);
    println!("  ∇ᴵ(z, z) = {:.12}", beltrami_first(&geo, &z, &z, Form::First)?);

    let ellipsoid = Surface::new(SurfaceSpec::Ellipsoid { a: 1.0, b: 1.3, c: 0.7 })?;
    let geo = ellipsoid.local(1.1, 2.0)?;
    println!("\nellipsoid (1, 1.3, 0.7) at (1.1, 2.0)");
    for form in [Form::First, Form::Second, Form::Third] {
        let ln = laplacian_vector(&geo, &VectorField::gauss_map(), form)?;
        println!("  Δ^{form:<3} N = ({:>10.6}, {:>10.6}, {:>10.6})", ln.x, ln.y, ln.z);
    }
    let gk = grad_i(&geo, &ScalarField::gauss_curvature())?;
    println!("  gradᴵK = ({:>10.6}, {:>10.6}, {:>10.6})", gk.x, gk.y, gk.z);
    println!("  gradᴵK · N = {:.2e}", gk.dot(&geo.normal.value()));
    let res = verify_gauss_identity(&geo)?;
    println!("  |Δᴵᴵ N - gradᴵK/(2K) - 2H N| = {:.2e}", res.norm());
    Ok(())
}
