"""Renderer backend: turns a trajectory file into PNG frames.

Consumes the trajectory JSON contract (schema version 1) produced by the
planning tool, mixes class embeddings per frame and runs a class-conditional
generator over the planned latents. Exit codes: 0 success, 2 schema
violation, 3 model-load failure, 4 render failure.
"""

__version__ = "0.1.0"
