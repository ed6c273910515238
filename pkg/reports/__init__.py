# Report persistence: JSON, CSV and binary matrix files
