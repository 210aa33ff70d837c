# Command-line subcommand families
