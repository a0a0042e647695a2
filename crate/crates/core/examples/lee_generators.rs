//! The Lee generator of the Hopf link and the filtration level of its class.

use khlee::corpus;
use khlee::cube::{build_cube, DEFAULT_LIMIT};
use khlee::frobenius::Q;
use khlee::leegen::{check_cycle, filtration_level, lee_data_brute, lee_generator};
use num_traits::One;

fn main() -> khlee::Result<()> {
    let d = corpus::hopf();
    let g = lee_generator(&d)?;
    println!("s_o has {} terms, lowest q = {:?}", g.terms.len(), g.q_level());

    let cube = build_cube(&d, DEFAULT_LIMIT)?;
    let lee = cube.complex.specialize_t(Q::one());
    let z = g.in_cube(&cube);
    check_cycle(&lee, &z)?;
    println!("level of [s_o] = {}", filtration_level(&lee, &z)?);

    let data = lee_data_brute(&d, DEFAULT_LIMIT, false)?;
    println!("levels of [s_o + s_o'] and [s_o - s_o']: {:?}", data.levels);
    Ok(())
}
