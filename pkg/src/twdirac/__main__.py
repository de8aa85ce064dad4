from twdirac.cli import main
main()
