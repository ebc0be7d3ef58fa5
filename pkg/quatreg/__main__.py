from quatreg.cli import main

main()
