//! Yes/no decoding for the N-binary decomposition and verification prompts.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinaryAnswer {
    Yes,
    No,
    /// Neither or both cue words were present; the prompt abstains.
    Invalid,
}

/// Scan the first 16 normalized tokens for a yes/no cue word.
pub fn binary_decode(output: &str) -> BinaryAnswer {
    let mut saw_yes = false;
    let mut saw_no = false;
    for token in output.split_whitespace().take(16) {
        let token: String = token
            .trim_matches(|c: char| !c.is_alphanumeric())
            .to_lowercase();
        match token.as_str() {
            "yes" => saw_yes = true,
            "no" => saw_no = true,
            _ => {}
        }
    }
    match (saw_yes, saw_no) {
        (true, false) => BinaryAnswer::Yes,
        (false, true) => BinaryAnswer::No,
        _ => BinaryAnswer::Invalid,
    }
}
