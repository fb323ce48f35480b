//! Image, video-frame and tensor file formats.

mod corrupt;
mod ppm;
mod tns;
mod video;

pub use corrupt::{corrupt_salt, PixelMask};
pub use ppm::{encode_ppm, load_ppm, parse_ppm, quantize, save_ppm, to_byte, to_luma};
pub use tns::{read_tns, read_tns_from, write_tns, write_tns_to, TNS_MAGIC};
pub use video::{frame, frame_paths, load_frames, save_frames};
