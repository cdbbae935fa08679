-- The standard prelude.

data Unit = U
data Bool = True | False
data Nat = Zero | Succ(Nat)
data List = Nil | Cons(Nat, List)
data Tree = Leaf | Join(Nat, Tree, Tree)

iterator cbn Nat -> Nat
iterator cbv Nat -> Nat
iterator cbn List -> Nat
iterator cbv List -> Nat

-- addition, call-by-value: the result is handed to c
name AddCBV : Nat -> Nat -> ~~Nat
name AddCBV' : Nat -> ~Nat -> Nat -> _|_
rule AddCBV.n.m.c -> n.(c.m).(AddCBV'.m.c)
rule AddCBV'.m.c.n' -> AddCBV.n'.(Succ.m).c

-- addition, call-by-name: the result is itself a numeral
name AddCBN : Nat -> Nat -> Nat
name AddCBN' : Nat -> ~Nat -> Nat -> _|_
rule AddCBN.n.m.c1.c2 -> n.(m.c1.c2).(AddCBN'.m.c2)
rule AddCBN'.m.c2.n' -> c2.(AddCBN.n'.m)

name Id : _|_ -> _|_
rule Id.x -> x

-- storage operators
name StoreNat : Nat -> ~~Nat
name StoreNatA : ~Nat -> ~Nat
name StoreNatB : ~Nat -> ~Nat
rule StoreNat.n.r -> n.(r.Zero).(StoreNatA.r)
rule StoreNatA.r.m -> StoreNat.m.(StoreNatB.r)
rule StoreNatB.r.m' -> r.(Succ.m')

name UnstoreNat : ~~Nat -> Nat
name UseNat : _|_ -> ~Nat -> ~Nat
rule UnstoreNat.f.z.s -> f.(UseNat.z.s)
rule UseNat.z.s.n -> n.z.s

-- addition through the call-by-value iterator
name F1 : Nat -> ~~Nat
name F2 : Nat -> ~~Nat
name AddCBVIt : Nat -> Nat -> ~~Nat
rule F1.x.c -> c.x
rule F2.x.c -> c.(Succ.x)
rule AddCBVIt.m.n.c -> ItCBV_Nat_Nat.(F1.m).F2.c.n

-- list length, both styles
name LengthCBN : List -> Nat
name LengthCBN^1 : Nat
name LengthCBN^2 : Nat -> Nat -> Nat
rule LengthCBN.x.c1.c2 -> ItCBN_List_Nat.LengthCBN^1.LengthCBN^2.x.c1.c2
rule LengthCBN^1.c1.c2 -> Zero.c1.c2
rule LengthCBN^2.x.n.c1.c2 -> Succ.n.c1.c2

name LengthCBV : List -> ~~Nat
name LengthCBV^1 : ~~Nat
name LengthCBV^2 : Nat -> Nat -> ~~Nat
rule LengthCBV.x.c -> ItCBV_List_Nat.LengthCBV^1.LengthCBV^2.c.x
rule LengthCBV^1.c -> c.Zero
rule LengthCBV^2.x.n.c -> c.(Succ.n)
