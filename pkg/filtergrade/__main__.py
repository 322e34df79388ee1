from filtergrade.filtergrade import main

main()
