# the squaring graph below, at and above its bound
field Q
cell X = Gm(t)
corr sq : X -> X = { component "u - t^2" mult 1 }
map cube : X -> X = { "t^3" }
class graph(cube) expect 3
newton sq expect 2
rho sq --n 0 expect-fail
rho sq --n 1 expect-fail IMPROPER_INTERSECTION
rho sq --auto expect "2"
homotopy sq 2 3
homotopy sq 0 2 expect-fail NOT_FINITE
compose sq graph(cube)
degree 2*sq - graph(cube) expect 1
