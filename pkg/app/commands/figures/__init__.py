"""Figure reproduction presets."""
