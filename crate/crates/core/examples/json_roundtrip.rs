//! Save skeletal data to JSON and load it back.

use morita::bundled;
use morita::io;

fn main() -> morita::Result<()> {
    let data = bundled::failure_mode_2()?;
    let text = io::to_json(&data);
    println!("{text}");

    let back = io::from_json(&text)?;
    assert_eq!(back, data);
    assert_eq!(io::to_json(&back), text);
    println!("round trip is byte-identical ({} bytes)", text.len());

    match io::from_json("{\"format_version\": 1,\n \"category_c\": }") {
        Err(e) => println!("malformed input: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
