//! Encode one year's mask as PGM and RLE JSON and decode both back.
//!
//!     cargo run --example encode_masks -- data/sample/config.toml 2100

use tidelens::scene::{decode_mask_pgm, decode_mask_rle, encode_mask_pgm, encode_mask_rle};
use tidelens::{AppConfig, Engine};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let config = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/sample/config.toml").into());
    let year: i64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2100);

    let engine = Engine::load(&AppConfig::load(config)?)?;
    let entry = engine.year_entry(year)?;
    let pgm = encode_mask_pgm(&entry.mask);
    let rle = encode_mask_rle(&entry.mask);
    println!(
        "{year}: level {} m, {} flooded cells",
        entry.level, entry.stats.flooded_cells
    );
    println!("PGM: {} bytes, RLE JSON: {} bytes", pgm.len(), rle.len());

    let from_pgm = decode_mask_pgm(&pgm, entry.level)?;
    let from_rle = decode_mask_rle(&rle)?;
    assert_eq!(from_pgm, entry.mask);
    assert_eq!(from_rle, entry.mask);
    println!("both encodings decode to the original mask");
    Ok(())
}
