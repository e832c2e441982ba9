# Grid tasks package
