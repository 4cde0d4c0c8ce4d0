"""Batch encoder: questions.jsonl -> sentence-transformer vectors -> SOCV.

Sidecar to the question-clustering pipeline. It communicates with that
pipeline only through files: it reads the pipeline's questions.jsonl output
and writes SOCV vector files with the identical binary layout the pipeline
reads back.
"""

from .encoder import EncoderConfig, EncoderError, encode_file, write_socv

__version__ = "0.1.0"

__all__ = ["EncoderConfig", "EncoderError", "encode_file", "write_socv"]
