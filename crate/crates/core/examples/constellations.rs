//! List the Gray-labelled points of the supported constellations and check a
//! noiseless round trip through the mapper and demapper.
//!
//! ```bash
//! cargo run -p pa-linksim --example constellations
//! ```

use pa_linksim::{count_bit_errors, Constellation, ModScheme, SimRng};

fn main() -> pa_linksim::Result<()> {
    let schemes = [
        ModScheme::psk(2)?,
        ModScheme::psk(4)?,
        ModScheme::psk(8)?,
        ModScheme::qam(16)?,
    ];
    for scheme in schemes {
        let c = Constellation::new(scheme);
        let k = scheme.bits_per_symbol();
        println!("{scheme}: mean energy {:.15}", c.mean_energy());
        for (label, p) in c.points().iter().enumerate() {
            println!("  {label:0k$b}  {:+.4} {:+.4}i", p.re, p.im);
        }

        let mut bits = vec![false; 1000 * k];
        SimRng::from_seed(1).fill_bits(&mut bits);
        let back = c.demap(&c.map_bits(&bits)?);
        println!(
            "  round trip bit errors: {}\n",
            count_bit_errors(&bits, &back)?
        );
    }
    Ok(())
}
