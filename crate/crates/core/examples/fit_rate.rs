//! Recovers the transformation rate from a handful of observed
//! preparedness readings.

use quasar_core::trajectory::fit_lambda;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (alpha, beta) = (0.25, 0.9);
    // quarterly readings, slightly noisy
    let observations = [(1.0, 0.41), (2.0, 0.52), (4.0, 0.69), (6.0, 0.77), (8.0, 0.83)];

    let fit = fit_lambda(&observations, alpha, beta)?;
    println!("lambda   {:.5}", fit.lambda);
    println!("SSE      {:.3e}", fit.residual);
    if fit.saturated {
        println!("warning: the best rate lies on the edge of the search range");
    }
    println!(
        "half-way point after {:.2} quarters",
        std::f64::consts::LN_2 / fit.lambda
    );
    Ok(())
}
