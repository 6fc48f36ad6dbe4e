//! File formats: the pmseq binary container, binary PGM ingestion, scenario
//! description files, and the CSV schemas for tracks, ground truth, and
//! reports.

pub mod pgm;
pub mod pmseq;
pub mod report;
pub mod scenario;
