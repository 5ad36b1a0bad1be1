//! Builds the worked apportionment pairs of orders 2, 3 and 4 and prints
//! their moments: lower dual moments agree, the m-th one does not.

use dualrisk::apportionment::{make_pair, GapSpec};
use dualrisk::lottery::EqualProbLottery;
use dualrisk::rational::rat;
use dualrisk::repro::worked_pairs;
use dualrisk::valuation::{dual_moment, primal_moment};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (label, base, m, big_m) in worked_pairs() {
        let base = EqualProbLottery::from_integers(&base)?;
        let pair = make_pair(&base, m, &rat(1, big_m), &GapSpec::minimal(m), 0, 1)?;
        println!("{label}, M = {big_m}\n{pair}");
        for (name, l) in [("C", pair.c_lottery()), ("D", pair.d_lottery())] {
            let dual: Vec<String> = (1..=m).map(|k| dual_moment(&l, k).to_string()).collect();
            let central: Vec<String> = (2..=4).map(|k| primal_moment(&l, k).to_string()).collect();
            println!(
                "  {name}: dual moments [{}], central moments 2..4 [{}]",
                dual.join(", "),
                central.join(", ")
            );
        }
        println!("  provenance {}", pair.provenance.to_json());
    }
    Ok(())
}
