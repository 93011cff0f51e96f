//! Circuit builders (in progress).
