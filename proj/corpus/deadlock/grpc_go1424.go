// Source: real-world grpc-go#1424, minimal reconstruction
// Expected: Deadlock
//
// Dial waits for the balancer's first address update, while the balancer
// waits for a connection-state notification that only Dial would send.
package main

import "fmt"

type Address struct {
	addr string
}

type State struct {
	ready bool
}

func balancer(updates chan Address, states chan State) {
	s := <-states
	fmt.Println("balancer saw", s.ready)
	updates <- Address{addr: "localhost:50051"}
}

func dial(updates chan Address, states chan State) {
	a := <-updates
	fmt.Println("dialing", a.addr)
	states <- State{ready: true}
}

func main() {
	updates := make(chan Address)
	states := make(chan State)
	go balancer(updates, states)
	dial(updates, states)
}
