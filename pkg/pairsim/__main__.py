from pairsim.cli import main

main()
