from torus_chow.cli import main

raise SystemExit(main())
