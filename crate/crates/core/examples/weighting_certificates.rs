//! Sign certificates for the m-th derivative of several weighting functions,
//! from equidistant finite differences and, where possible, exactly.

use dualrisk::weighting::{WeightingSpec, DEFAULT_GRID_COUNT};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let specs = [
        "identity",
        "quadratic:beta=1/2",
        "dualpower:m=3",
        "power:k=5/2",
        "poly:0;0;3;-2",
        "tk:gamma=0.61",
        "prelec:a=0.65,b=1",
        "tabulated:0:0;1/4:1/2;1/2:5/8;3/4:3/4;1:1",
    ];
    for text in specs {
        let w: WeightingSpec = text.parse()?;
        print!("{:<44}", w.to_string());
        for m in 2..=4 {
            let grid = w.finite_difference_sign(m, DEFAULT_GRID_COUNT);
            let exact = match w.analytic_derivative_sign(m) {
                Ok(c) => c.label(),
                Err(_) => "n/a",
            };
            print!("  m={m}: {:<12} exact {:<12}", grid.label(), exact);
        }
        println!();
    }
    Ok(())
}
