//! Draws a correlated multi-tap channel and inspects its per-tap power and
//! antenna correlation.

use fronthaul_md::signal::{draw_channel, PowerDelayProfile};

fn main() -> fronthaul_md::Result<()> {
    let pdp = PowerDelayProfile::tdla_standin(6)?;
    println!("profile {}: {:?}", pdp.label(), pdp.tap_powers());
    let chan = draw_channel(&pdp, 16, 1, 0.7, 42)?;
    for (l, tap) in chan.taps.iter().enumerate() {
        println!("tap {l}: mean |h|^2 = {:.3}", tap.iter().map(|v| v.norm_sqr()).sum::<f64>() / tap.len() as f64);
    }
    let hf = chan.frequency_response(64);
    let a = hf[0].column(0);
    let b = hf[0].column(1);
    let c = a.dotc(&b) / (a.norm() * b.norm());
    println!("subcarrier-domain correlation between antennas 0 and 1: {:.3}", c.norm());

    let custom = PowerDelayProfile::parse("L = 3\npowers = 1.0, 0.5, 0.25\nlabel = ramp\n", "file")?;
    println!("parsed profile {}: {:?}", custom.label(), custom.tap_powers());
    Ok(())
}
