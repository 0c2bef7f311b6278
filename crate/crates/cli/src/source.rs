use honeybee::hexboard::{hex_to_graph, HexBoard};
use honeybee::{load_instance, Instance};

/// A two-player field read from a file: either an instance or a hex board.
#[derive(Debug, Clone)]
pub struct GameSource {
    pub instance: Instance,
    pub board: Option<HexBoard>,
}

/// Board files are recognized by their `cells` field.
pub fn load_game_source(text: &str) -> Result<GameSource, String> {
    let probe: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if probe.get("cells").is_some() {
        let board = HexBoard::from_json(text).map_err(|e| e.to_string())?;
        Ok(GameSource {
            instance: hex_to_graph(&board),
            board: Some(board),
        })
    } else {
        let instance = load_instance(text).map_err(|e| e.to_string())?;
        Ok(GameSource { instance, board: None })
    }
}
