# Command runners module
