"""Census runs over connection sets."""
