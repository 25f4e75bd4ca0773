//! Writes the sample JSON documents used by the README, the book and the
//! CLI integration tests.
//!
//! ```bash
//! cargo run -p layerscope --example generate_samples -- samples
//! ```

use layerscope::channel::BroadcastingChannel;
use layerscope::json::{ChannelDoc, ObservableDoc};
use layerscope::observable::Observable;
use layerscope::operator::ComplexMatrix;
use layerscope::scenario::fixtures;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "samples".into());
    std::fs::create_dir_all(&dir)?;

    let write = |name: &str, body: String| -> std::io::Result<()> {
        let path = format!("{dir}/{name}");
        std::fs::write(&path, body + "\n")?;
        println!("wrote {path}");
        Ok(())
    };

    let sharp_z = Observable::qubit_binary([0.0, 0.0, 1.0])?;
    let sharp_x = Observable::qubit_binary([1.0, 0.0, 0.0])?;
    let lam = 1.0 / 2.0f64.sqrt();
    let unsharp_x = sharp_x.unsharp(lam)?;
    let unsharp_y = Observable::qubit_binary([0.0, 1.0, 0.0])?.unsharp(lam)?;

    write(
        "sharp-z.json",
        serde_json::to_string(&ObservableDoc::from_observable(&sharp_z))?,
    )?;
    write(
        "sharp-x.json",
        serde_json::to_string(&ObservableDoc::from_observable(&sharp_x))?,
    )?;
    write(
        "unsharp-x.json",
        serde_json::to_string(&ObservableDoc::from_observable(&unsharp_x))?,
    )?;
    write(
        "unsharp-y.json",
        serde_json::to_string(&ObservableDoc::from_observable(&unsharp_y))?,
    )?;
    write(
        "xy-joint.json",
        serde_json::to_string(&ObservableDoc::from_joint(&fixtures::xy_joint()))?,
    )?;

    let copier = BroadcastingChannel::copier_from_basis(&ComplexMatrix::identity(2))?;
    write(
        "z-copier.json",
        serde_json::to_string(&ChannelDoc::from_channel(copier.channel()))?,
    )?;

    let witness = layerscope::json::WitnessDoc::Broadcaster {
        channel: ChannelDoc::from_channel(copier.channel()),
    };
    write(
        "z-copier-witness.json",
        serde_json::to_string(&witness)?,
    )?;

    Ok(())
}
