//! Chernoff information between row classes and the error-rate overlay
//! derived from it.

use bisbm::info::{chernoff_info, chernoff_objective, overall_rate_prediction, separation};
use bisbm::MeanParams;

fn main() -> bisbm::Result<()> {
    let lambda = MeanParams::from_rows(&[vec![12.0, 3.0, 5.0], vec![4.0, 10.0, 5.0], vec![4.0, 3.0, 9.0]])?;
    let info = chernoff_info(&lambda);
    let sep = separation(&lambda);

    for k in 0..3 {
        for r in (k + 1)..3 {
            println!(
                "I({k},{r}) = {:.4} at s* = {:.4}, eps = {:.4}",
                info.value(k, r),
                info.s_star(k, r),
                sep.eps_kr[k][r]
            );
        }
    }

    let rows = lambda.to_rows();
    print!("I_s(0,1) over s:");
    for s in [0.1, 0.3, 0.5, 0.7, 0.9] {
        print!(" {:.3}", chernoff_objective(&rows[0], &rows[1], s));
    }
    println!();

    let pi = [1.0 / 3.0; 3];
    for scale in [1.0, 2.0, 4.0] {
        let scaled = lambda.scaled(scale);
        let info = chernoff_info(&scaled);
        println!(
            "scale {scale}: I_min = {:.3}, predicted rate {:.3e}",
            info.i_min(),
            overall_rate_prediction(&info, scaled.min_entry(), &pi)
        );
    }
    Ok(())
}
