from hexorb.cli import main

raise SystemExit(main())
