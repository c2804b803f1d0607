//! Component-count tables for the boundary-measure and homogeneous
//! constraints, printed as ranges of m sharing the same ω.

use dirichlet_eigen::bounds::{corollary5_tables, theorem2v_table, BetaMode, BoundReport, TableOptions};

fn ranges(rows: &[BoundReport]) {
    let mut start = 0;
    for i in 1..=rows.len() {
        if i == rows.len() || rows[i].omega_max != rows[start].omega_max {
            let w = rows[start].omega_max.map_or("n/a".to_string(), |w| w.to_string());
            println!("  m = {:>3}..={:<3} ω ≤ {w}", rows[start].dimension, rows[i - 1].dimension);
            start = i;
        }
    }
}

fn main() -> dirichlet_eigen::Result<()> {
    let m_max = std::env::args().nth(1).map_or(600, |a| a.parse().expect("m_max"));
    let opts = TableOptions::default();

    println!("boundary measure");
    ranges(&theorem2v_table(m_max, &opts)?);
    for mode in [BetaMode::LebesgueMeasure, BetaMode::TorsionalRigidity] {
        println!("{mode:?}");
        ranges(&corollary5_tables(mode, m_max, &opts)?);
    }
    Ok(())
}
