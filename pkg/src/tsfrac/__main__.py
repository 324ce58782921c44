from tsfrac.cli import main

main()
