from qembound.cli import main

main()
