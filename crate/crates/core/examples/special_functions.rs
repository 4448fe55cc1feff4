use netshare::specfun;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>10} {:>14} {:>14} {:>14} {:>14}", "theta", "zeta(a=4)", "sqrt*atan", "zeta0(a=4)", "zeta(a=3,l=2)");
    for theta in [1e-3f64, 0.1, 1.0, 10.0, 1e3] {
        let r = theta.sqrt();
        println!(
            "{theta:>10} {:>14.10} {:>14.10} {:>14.10} {:>14.10}",
            specfun::zeta(theta, 4.0)?,
            r * r.atan(),
            specfun::zeta0(theta, 4.0)?,
            specfun::zeta_l(theta, 3.0, 2)?
        );
    }
    // ₂F₁(1, 1/2; 3/2; -x²) = atan(x)/x
    let x: f64 = 3.0;
    println!("2F1(1,1/2;3/2;-9) = {:.15}, atan(3)/3 = {:.15}", specfun::gauss_2f1(1.0, 0.5, 1.5, -x * x)?, x.atan() / x);
    Ok(())
}
