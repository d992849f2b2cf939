//! Path loss, SNR and MCS selection with the default 5 GHz radio.

use gwp::rf::{fspl_db, max_distance, snr_db, McsTable, RadioConfig};

fn main() -> gwp::Result<()> {
    let radio = RadioConfig::default();
    let table = McsTable::default();

    println!("link constant K = {:.4} dB", radio.link_constant_db());
    for d in [1.0, 10.0, 18.11, 50.0] {
        println!("FSPL({d:>6} m) = {:.3} dB", fspl_db(d, &radio)?);
    }

    let p = 22.0;
    println!("\nat {p} dBm:");
    println!("{:>4} {:>10} {:>8} {:>10}", "mcs", "Mbit/s", "SNR dB", "d_max m");
    for e in table.entries() {
        println!(
            "{:>4} {:>10.1} {:>8.1} {:>10.2}",
            e.index,
            e.data_rate_bps / 1e6,
            e.min_snr_db,
            max_distance(p, e.min_snr_db, &radio)
        );
    }

    for d in [5.0, 20.0, 80.0, 400.0] {
        let snr = snr_db(p, d, &radio)?;
        match table.rate_for_snr(snr) {
            Some(m) => println!("{d:>5} m: SNR {snr:.1} dB -> MCS {} ({} Mbit/s)", m.index, m.data_rate_bps / 1e6),
            None => println!("{d:>5} m: SNR {snr:.1} dB -> no link"),
        }
    }

    let demand = 146.25e6;
    let m = table.min_mcs_for_demand(demand)?;
    println!("\nlowest MCS carrying {} Mbit/s: {}", demand / 1e6, m.index);
    Ok(())
}
