# Computational services for the enrichment workbench
