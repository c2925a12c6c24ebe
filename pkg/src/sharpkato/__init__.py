"""Sharp vectorial Kato inequality toolkit for p-harmonic maps."""
